# Copyright 2026 The CoTM Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Independent derivation of the constants frozen into the C++ tests.

Shares no code with the library. Run with `python3 derive_values.py` and
compare against the literals in test_random.cpp and test_data.cpp.
"""

import numpy as np

MASK = 0xFFFFFFFF
SITES = {"type1": 1, "type2": 2, "ia": 3, "ib": 4, "shuffle": 5, "init": 6}


def philox4x32_10(ctr, key):
    c0, c1, c2, c3 = ctr
    k0, k1 = key
    for _ in range(10):
        p0 = 0xD2511F53 * c0
        p1 = 0xCD9E8D57 * c2
        c0, c1, c2, c3 = ((p1 >> 32) ^ c1 ^ k0) & MASK, p1 & MASK, ((p0 >> 32) ^ c3 ^ k1) & MASK, p0 & MASK
        k0 = (k0 + 0x9E3779B9) & MASK
        k1 = (k1 + 0xBB67AE85) & MASK
    return [c0, c1, c2, c3]


def block(seed, site, epoch, example, output, index):
    return philox4x32_10([epoch, example, (SITES[site] << 24) | output, index],
                         [seed & MASK, seed >> 32])


def pair_bits(seed, site, epoch, example, output, clause):
    return block(seed, site, epoch, example, output, clause // 4)[clause % 4]


def literal_bits(seed, site, epoch, example, output, clause, literal, n_literals):
    index = clause * ((n_literals + 3) // 4) + literal // 4
    return block(seed, site, epoch, example, output, index)[literal % 4]


def shuffle_bits(seed, epoch, position):
    b = block(seed, "shuffle", epoch, position >> 33, 0, (position >> 1) & MASK)
    lane = (position & 1) * 2
    return (b[lane] << 32) | b[lane + 1]


def gaussian_kernel(window):
    sigma = 0.3 * ((window - 1) * 0.5 - 1) + 0.8
    half = window // 2
    k = np.exp(-((np.arange(window) - half) ** 2) / (2 * sigma * sigma))
    return k / k.sum()


def binarize(img, window, threshold):
    k = gaussian_kernel(window)
    half = window // 2
    padded = np.pad(img.astype(np.float64), half, mode="edge")
    rows, cols = img.shape
    mean = np.zeros((rows, cols))
    for r in range(rows):
        for c in range(cols):
            patch = padded[r:r + window, c:c + window]
            mean[r, c] = k @ patch @ k
    return (img > mean - threshold).astype(int)


def hexs(words):
    return " ".join(f"0x{w:08x}" for w in words)


if __name__ == "__main__":
    print("philox zero:", hexs(philox4x32_10([0, 0, 0, 0], [0, 0])))
    print("philox ones:", hexs(philox4x32_10([MASK] * 4, [MASK, MASK])))
    print("philox pi:", hexs(philox4x32_10([0x243F6A88, 0x85A308D3, 0x13198A2E, 0x03707344],
                                           [0xA4093822, 0x299F31D0])))
    seed = 0x0123456789ABCDEF
    print("pair_bits type1 (3,7) out 2 clause 5:", hex(pair_bits(seed, "type1", 3, 7, 2, 5)))
    print("pair_bits type2 (0,0) out 0 clause 0:", hex(pair_bits(seed, "type2", 0, 0, 0, 0)))
    print("literal_bits ib (1,2) out 0 clause 3 lit 9 of 12:",
          hex(literal_bits(seed, "ib", 1, 2, 0, 3, 9, 12)))
    print("literal_bits ia (5,1) out 3 clause 2 lit 6 of 6:",
          hex(literal_bits(seed, "ia", 5, 1, 3, 2, 6, 6)))
    print("shuffle_bits epoch 4 pos 5:", hex(shuffle_bits(seed, 4, 5)))
    print("init pair_bits seed 7 out 1 clause 9:", hex(pair_bits(7, "init", 0, 0, 1, 9)))

    np.set_printoptions(precision=17)
    for w in (3, 11):
        print(f"kernel {w}:", ", ".join(f"{v:.17g}" for v in gaussian_kernel(w)))

    img = np.array([[(r * 37 + c * 91 + r * c * 13) % 256 for c in range(7)] for r in range(5)],
                   dtype=np.uint8)
    print("image:", ", ".join(str(v) for v in img.flatten()))
    for w in (3, 5, 11):
        print(f"binarize window {w}:", "".join(str(v) for v in binarize(img, w, 2.0).flatten()))
    dot = np.zeros((11, 11), dtype=np.uint8)
    dot[5, 5] = 255
    out = binarize(dot, 11, 2.0)
    print("bright pixel center:", out[5, 5], "ones:", int(out.sum()))
    k = gaussian_kernel(11)
    print("bright pixel mean at center:", f"{255 * k[5] * k[5]:.17g}")
