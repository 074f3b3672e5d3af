package demo;

public class TextBlocks {
    /** Returns JSON. */
    public String json() {
        return """
            { "a": { "b": "}" } }
            \""" still inside
            """;
    }

    /** Follows the text block. */
    public String plain() {
        return "x";
    }
}
