public class ListOps {
    public static int[] evens(int[] input) {
        int[] kept = new int[input.length];
        int used = 0;
        for (int n = 0; n < input.length; n++) {
            if (input[n] % 2 == 0) {
                kept[used] = input[n];
                used = used + 1;
            }
        }
        return kept;
    }

    public static int total(int[] input) {
        int sum = 0;
        for (int n = 0; n < input.length; n++) {
            sum += input[n];
        }
        return sum;
    }

    public double trace() {
        double total = 0.0;
        for (int i = 0; i < rows && i < cols; i++) {
            total += cells[i][i];
        }
        return total;
    }

    private final double[][] cells = null;
    private final int rows = 0;
    private final int cols = 0;
}
