// A value type.
public record Point(int x, int y) {
    public Point {
        if (x < 0) throw new IllegalArgumentException();
    }

    public double norm() {
        return Math.sqrt(x * x + y * y);
    }
}

@interface Marker {
    String value() default "";
    int[] codes() default {1, 2};
}
