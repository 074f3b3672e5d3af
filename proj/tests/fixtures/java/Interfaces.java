package demo;

public interface Interfaces<T> {
    /** Abstract, no body. */
    T get();

    /** Default implementation. */
    default T getOrElse(T fallback) {
        T v = get();
        return v == null ? fallback : v;
    }

    /** Static factory. */
    static <T> Interfaces<T> of(T value) {
        return () -> value;
    }

    private void helper() {
    }
}
