public class Grid {
    private final double[][] slots;
    private final int height;
    private final int width;

    public Grid(int height, int width) {
        this.height = height;
        this.width = width;
        this.slots = new double[height][width];
    }

    public Grid multiply(Grid other) {
        Grid outcome = new Grid(height, other.width);
        for (int r = 0; r < height; r++) {
            for (int c = 0; c < other.width; c++) {
                double acc = 0.0;
                for (int k = 0; k < width; k++) {
                    acc += slots[r][k] * other.slots[k][c];
                }
                outcome.slots[r][c] = acc;
            }
        }
        return outcome;
    }

    public double trace() {
        double total = 0.0;
        for (int r = 0; r < height && r < width; r++) {
            total += slots[r][r];
        }
        return total;
    }

    public Grid transpose() {
        Grid outcome = new Grid(width, height);
        for (int r = 0; r < height; r++) {
            for (int c = 0; c < width; c++) {
                outcome.slots[c][r] = slots[r][c];
            }
        }
        return outcome;
    }
}
