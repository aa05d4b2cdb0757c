"""Exact, approximate and k-approximated text-to-pattern L1 and Hamming distances."""
from .convolve import WeightFunction, correlate, exact_hamming, exact_l1, weighted_mismatches
from .hamapprox import approx_ham, approx_self_ham, ham_binary
from .kangaroo import build_lcp, k_mismatch, verify_alignment
from .kernel import classify_period, kapprox_l1, kernelize
from .l1approx import ApproxParams, approximate, approximate_once, score
from .oracle import cap, naive_ham, naive_l1, naive_wild
from .reduce import apply, ham_to_l1, kapprox_l1_via_ham, l1_to_ham
from .rledist import integrate, rle_ham, rle_l1, sparse_to_capped
from .seqcore import (
    INF, WILDCARD, DistanceArray, IntSequence, RleSequence, WildcardSequence,
    generate, normalize, normalize_pair, rle_decode, rle_encode,
)

__version__ = "0.1.0"
