package demo;

public class Conflict {
<<<<<<< HEAD
    int value() {
        return 1;
    }
=======
    int value() {
        return 2;
    }
>>>>>>> feature
    /** After the conflict. */
    void after() {
    }
}
