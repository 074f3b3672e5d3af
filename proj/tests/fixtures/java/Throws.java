package demo;

import java.io.*;

public class Throws {
    /** Reads a file. */
    public String read(File f) throws IOException, java.util.concurrent.TimeoutException {
        return "";
    }

    /** Generic exception type. */
    <E extends Exception> void rethrow(Exception e) throws E {
        throw (E) e;
    }
}
