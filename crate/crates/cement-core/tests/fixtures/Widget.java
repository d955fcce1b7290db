package com.example.parser;

import java.util.List;
import java.util.Map;

/** A widget carrying a dozen extractable methods. */
public class Widget {

    private int count;
    private int[] table = {1, 2, 3};

    static {
        System.out.println("init { not a method");
    }

    public Widget(int count) {
        this.count = count;
    }

    public int getCount() {
        return count;
    }

    void setCount(int value) {
        this.count = value;
    }

    static String describe(int a, int b) {
        String brace = "{";
        return brace + (a + b) + '}';
    }

    public <T> List<T> wrap(Map<String, T> items,
                            T fallback) {
        // stray } in a comment
        return null;
    }

    int compute(int x) throws IllegalStateException {
        Runnable r = new Runnable() {
            public void run() {
                count += x;
            }
        };
        r.run();
        return count;
    }

    public enum Mode {
        FAST,
        SLOW;

        String label(Mode mode) {
            return mode.name();
        }
    }

    interface Listener {
        void onEvent(String name);

        default boolean accepts(String name) {
            return !name.isEmpty();
        }
    }

    static class Inner {

        Inner() {
        }

        long tally(long[] values) {
            long sum = 0;
            for (long v : values) {
                sum += v;
            }
            return sum;
        }
    }

    @Deprecated
    protected Map<String, List<Integer>> index() {
        return null;
    }

    void emptyArgs() {
    }

    public static void main(String[] args) {
        new Widget(args.length).emptyArgs();
    }

    String[] names(String... prefixes) {
        return prefixes;
    }
}
