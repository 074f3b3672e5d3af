package demo;

public class Throwing {
    /** Try, catch, finally braces. */
    void guarded() {
        try {
            run();
        } catch (IllegalStateException | IllegalArgumentException e) {
            log(e);
        } finally {
            done();
        }
    }

    /** Synchronized block inside. */
    void locked() {
        synchronized (this) {
            count++;
        }
    }

    // Uses labels and nested loops
    void loops() {
        outer:
        for (int i = 0; i < 3; i++) {
            for (int j = 0; j < 3; j++) {
                if (j == i) continue outer;
            }
        }
    }
}
