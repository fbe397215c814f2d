"""Membership-mask tables for every subspace of GF(2)^q, q <= 6.

A subspace V is encoded as the 2^q-bit integer whose bit v is set iff
v in V, so it fits a uint64.  Intersections become ANDs and the sum
V + <b> is ``mask | translate(mask, b)``, where translating by b permutes
bit positions i -> i ^ b (a butterfly of block swaps).
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .gf2 import MAX_ENUMERATED_LEVELS, Subspace, enumerate_subspaces, reduce_basis

U64 = np.uint64


def mask_dim(mask: int) -> int:
    return mask.bit_count().bit_length() - 1


class MaskSpace:
    def __init__(self, q: int):
        self.q = q
        size = 1 << q
        self.subspaces = enumerate_subspaces(q)
        self.index = {s.basis: i for i, s in enumerate(self.subspaces)}
        self.blocks = [sum(1 << i for i in range(size) if not i >> k & 1) for k in range(q)]
        self._blocks_np = [U64(b) for b in self.blocks]

        masks = []
        for s in self.subspaces:
            m = 0
            for v in s.members():
                m |= 1 << v
            masks.append(m)
        self.masks = masks
        self.masks_np = np.array(masks, dtype=U64)
        self.dims = np.array([s.dim for s in self.subspaces], dtype=np.int64)

        count = len(self.subspaces)
        self.image = []
        self.image_basis = []
        for n in range(q + 1):
            idx = np.empty(count, dtype=np.int64)
            basis = np.zeros((count, q), dtype=U64)
            for i, s in enumerate(self.subspaces):
                b = reduce_basis(v >> (q - n) for v in s.basis)
                idx[i] = self.index[b]
                basis[i, :len(b)] = b
            self.image.append(idx)
            self.image_basis.append(basis)

        low = [(1 << (q - m)) - 1 for m in range(q + 1)]
        self.within_top = [
            np.array([all(v & low[m] == 0 for v in s.basis) for s in self.subspaces])
            for m in range(q + 1)
        ]
        self.injective = [self.dims[self.image[n]] == self.dims for n in range(q + 1)]
        self.coordinate = np.array(
            [all(v & (v - 1) == 0 for v in s.basis) for s in self.subspaces])

    def translate(self, mask: int, v: int) -> int:
        for k in range(self.q):
            if v >> k & 1:
                shift, keep = 1 << k, self.blocks[k]
                mask = ((mask & keep) << shift) | ((mask >> shift) & keep)
        return mask

    def add_basis(self, mask: int, basis) -> int:
        for v in basis:
            v = int(v)
            if v:
                mask |= self.translate(mask, v)
        return mask

    def translate_var(self, masks: np.ndarray, vs: np.ndarray) -> np.ndarray:
        """Elementwise translate of a mask array by a vector array."""
        for k in range(self.q):
            sel = (vs >> U64(k)) & U64(1)
            if not sel.any():
                continue
            shift, keep = U64(1 << k), self._blocks_np[k]
            swapped = ((masks & keep) << shift) | ((masks >> shift) & keep)
            masks = np.where(sel.astype(bool), swapped, masks)
        return masks

    def subspace(self, i: int) -> Subspace:
        return self.subspaces[i]

    def mask_of(self, s: Subspace) -> int:
        return self.masks[self.index[s.basis]]


@lru_cache(maxsize=None)
def mask_space(q: int) -> MaskSpace:
    if not 1 <= q <= MAX_ENUMERATED_LEVELS:
        raise ValueError(f"mask tables need 1 <= q <= {MAX_ENUMERATED_LEVELS}")
    return MaskSpace(q)
