/*
 * Reformatted copy of Matrix.java: only comments, blank lines and
 * indentation differ. Bags must be identical.
 */
public class Matrix {

    private final double[][] cells; // storage
    private final int rows;
    private final int cols;

    // build an empty matrix
    public Matrix(int rows, int cols) {
            this.rows = rows;
            this.cols = cols;
            this.cells = new double[rows][cols];
    }

    /** naive O(n^3) product */
    public Matrix multiply(Matrix other) {
        Matrix result = new Matrix(rows, other.cols);

        for (int i = 0; i < rows; i++) {
            for (int j = 0; j < other.cols; j++) {
                double sum = 0.0; // accumulator

                for (int k = 0; k < cols; k++) {
                    sum += cells[i][k] * other.cells[k][j];
                }
                result.cells[i][j] = sum;
            }
        }

        return result;
    }

    public double trace() {
        double total = 0.0;
        // main diagonal only
        for (int i = 0; i < rows && i < cols; i++) {
            total += cells[i][i];
        }
        return total;
    }

    public Matrix transpose() {
        Matrix result = new Matrix(cols, rows);
        for (int i = 0; i < rows; i++) {
            for (int j = 0; j < cols; j++) {
                result.cells[j][i] = cells[i][j];
            }
        }
        return result;
    }
}
