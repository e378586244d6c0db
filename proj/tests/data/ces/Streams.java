import java.util.List;
import java.util.stream.Collectors;

class Streams {
    List<Integer> evens(List<Integer> xs) {
        return xs.stream()
            .filter(x -> {
                int r = x % 2;
                return r == 0;
            })
            .collect(Collectors.toList());
    }

    void guarded(List<Integer> xs) {
        xs.forEach(x -> {
            if (x > 0) {
                System.out.println(x);
            }
        });
    }
}
