public class Outer {
    private int x;

    class Inner {
        void poke() {
            x++;
        }
    }

    static class Nested {
        int twice(int v) {
            return v * 2;
        }
    }

    Runnable task() {
        return new Runnable() {
            @Override
            public void run() {
                System.out.println("run");
            }
        };
    }
}
