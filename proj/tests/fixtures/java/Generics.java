package demo;

import java.util.*;

public class Generics {
    /**
     * Largest element of the list.
     */
    public static <T extends Comparable<T>> T max(List<? extends T> items) {
        T best = null;
        for (T t : items) {
            if (best == null || t.compareTo(best) > 0) {
                best = t;
            }
        }
        return best;
    }

    /** Groups values by key. */
    public Map<String, List<Integer>> group(Map<String, List<Integer>> input, Comparator<? super String> order) {
        Map<String, List<Integer>> out = new TreeMap<>(order);
        out.putAll(input);
        return out;
    }

    /** Nested generics with shift-like closers. */
    <K, V extends List<Map<K, V>>> void deep(Map<K, List<Map<String, V>>> m, Set<Set<K>> s) {
        if (m.size() >> 1 > s.size()) {
            return;
        }
    }
}
