import java.io.IOException;
import java.io.Reader;

public final class Parser {
    static final int LIMIT;

    static {
        LIMIT = Integer.getInteger("limit", 10);
    }

    String read(Reader r) {
        try {
            char[] buf = new char[LIMIT];
            int n = r.read(buf);
            return new String(buf, 0, n);
        } catch (IOException e) {
            return "";
        } finally {
            close(r);
        }
    }

    private void close(Reader r) {
        try (Reader c = r) {
            c.ready();
        } catch (IOException ignored) {
        }
    }
}
