# Bitsequences with rank/select, and DAC-coded integers.
# Run: python3 demos/01_succinct_primitives.py

import numpy as np

from k2triples import BitSequence, DacSequence

# %% rank and select
b = BitSequence("1011010011")
print(b, "ones:", b.ones)
print("rank1(5) =", b.rank1(5))      # ones in positions 0..5
print("select1(4) =", b.select1(4))  # position of the 4th one
print("select0(2) =", b.select0(2))

# select undoes rank on every 1 bit
for j in range(1, b.ones + 1):
    assert b.rank1(b.select1(j)) == j

# %% a bigger sequence and its overhead
rng = np.random.default_rng(0)
big = BitSequence(rng.random(1_000_000) < 0.1)
print("payload bits:", big.payload_bits(), "directory bits:", big.aux_bits())
print("vectorized rank:", big.rank1_many([0, 10, 999_999]))

# %% directly addressable codes
values = [5, 1, 9, 12, 0]
dac = DacSequence(values, chunk_width=2)
for level, (chunks, more) in enumerate(dac.levels):
    print(f"level {level}: chunks={chunks.tolist()} continue={more.to_string()}")
print("dac[3] =", dac[3])

# skewed values (most small) are where DAC pays off
skewed = rng.geometric(0.3, size=100_000) - 1
d = DacSequence(skewed, chunk_width=2)
print(f"{d.encoded_bits() / skewed.size:.2f} bits per value, "
      f"max value {skewed.max()}")
