"""Steganography in virtual bit-planes induced by redundant numeral systems.

Pixel values are decomposed over the weights of a numeral system (natural
numbers, primes, Fibonacci-p or plain binary) and message bits are hidden
in one of the resulting planes.
"""

from .numeral import (
    EncodingError, Kind, NumeralSystem, VirtualRepresentation, WeightFunction,
    canonical_encode, decode, decomposition_table, feasibility_table, is_canonical,
    make_system, natural_plane_count, representable_range,
)
from .pgm import GrayImage, PGMError, read_pgm, synthesize, write_pgm
from .stego import (
    CapacityError, CorruptStreamError, EmbedPlan, EmbedReport, capacity, embed_bit,
    embed_message, extract_bit, extract_message, pixel_eligible,
)
from .metrics import (
    DistortionReport, histogram, kl_divergence, mse_empirical, psnr_empirical, psnr_worst,
    sweep, wmse_theoretical,
)

__version__ = "0.1.0"
