class Braceless {
    int clamp(int v) {
        if (v < 0)
            return 0;
        else if (v > 9)
            return 9;
        for (int i = 0; i < 3; i++)
            for (int j = 0; j < 3; j++)
                v += i * j;
        while (v > 100) v /= 2;
        return v;
    }
}
