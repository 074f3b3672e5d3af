package demo;

public record Records(int x, int y) {
    /** Compact constructor validates. */
    public Records {
        if (x < 0) {
            throw new IllegalArgumentException();
        }
    }

    /** Explicit constructor. */
    public Records(int both) {
        this(both, both);
    }

    /** Euclidean length. */
    public double length() {
        return Math.sqrt(x * x + y * y);
    }

    record Pair<A, B>(A first, B second) {
        /** Swaps the pair. */
        Pair<B, A> swap() {
            return new Pair<>(second, first);
        }
    }
}
