"""Independent transcription of the stream generator, used to produce the
reference vectors in tests/test_rng.cpp."""

M = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15


def mix64(z):
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & M
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & M
    return z ^ (z >> 31)


def rotl(x, k):
    return ((x << k) | (x >> (64 - k))) & M


def xoshiro(seed):
    state, s = seed, []
    for _ in range(4):
        state = (state + GAMMA) & M
        s.append(mix64(state))
    while True:
        out = (rotl((s[0] + s[3]) & M, 23) + s[0]) & M
        t = (s[1] << 17) & M
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = rotl(s[3], 45)
        yield out


def derive_key(parent, index):
    return mix64(parent ^ mix64((index + GAMMA) & M))


def unit(bits):
    m = bits >> 11
    return 2.0**-54 if m == 0 else m * 2.0**-53


if __name__ == "__main__":
    for seed in (0, 1, 0xDEADBEEF):
        g = xoshiro(seed)
        print(f"seed {seed:#x}:", " ".join(f"{next(g):#018x}" for _ in range(4)))
    for p, i in ((1, 0), (1, 7), (0xDEADBEEF, 123456)):
        print(f"derive_key({p:#x}, {i}) = {derive_key(p, i):#018x}")
    g = xoshiro(derive_key(42, 3))
    print("slots of derive_key(42, 3):", [unit(next(g)).hex() for _ in range(3)])
