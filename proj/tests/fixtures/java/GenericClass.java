package demo;

import java.util.List;

public class GenericClass<T extends Number & Comparable<T>> {
    private T value;

    /** Stores a value. */
    public GenericClass(T value) {
        this.value = value;
    }

    /** Array of generic lists. */
    public void lists(List<String>[] arrays, List<? extends T> more) {
    }

    /** Bounded wildcard return. */
    public List<? super Integer> sink() {
        return null;
    }
}
