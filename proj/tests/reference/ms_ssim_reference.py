"""Reference MS-SSIM scores from TensorFlow for the image pairs used in the tests.

The pairs are generated from a splitmix64 stream so the C++ side can rebuild
them bit-for-bit (see make_pair in tests/support/ms_ssim_pairs.hpp).

    python3 tests/reference/ms_ssim_reference.py
"""
import math

import numpy as np
import tensorflow as tf

MASK = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed):
        self.state = seed & MASK

    def next(self):
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        return z ^ (z >> 31)

    def uniform(self):
        return (self.next() >> 11) * (1.0 / (1 << 53))


def make_pair(k):
    rows, cols = 170 + 3 * k, 181 + 5 * k
    rng = SplitMix64(1000 + k)
    fx, fy, ph = 0.02 + 0.1 * rng.uniform(), 0.02 + 0.1 * rng.uniform(), 6.0 * rng.uniform()
    noise = 0.05 + 0.05 * k
    a = np.empty((rows, cols))
    b = np.empty((rows, cols))
    for r in range(rows):
        for c in range(cols):
            base = 0.5 + 0.3 * math.sin(fx * c + ph) * math.cos(fy * r)
            a[r, c] = min(1.0, max(0.0, base + 0.1 * (rng.uniform() - 0.5)))
            b[r, c] = min(1.0, max(0.0, a[r, c] + noise * (rng.uniform() - 0.5)))
    return a, b


def main():
    for k in range(10):
        a, b = make_pair(k)
        score = tf.image.ssim_multiscale(a[..., None], b[..., None], max_val=1.0).numpy()
        print(f"    {float(score):.12f},  // pair {k}: {a.shape[0]}x{a.shape[1]}")


if __name__ == "__main__":
    main()
