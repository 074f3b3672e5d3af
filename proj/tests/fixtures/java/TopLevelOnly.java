// A snippet without any enclosing type.
/** Loose method. */
void loose(int x) {
    System.out.println(x);
}

int another() {
    return 0;
}
