"""Weighted subsums, dissociation and certificates."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from davenport import kernels
from davenport._accel import USE_NUMBA
from davenport.groups import AbelianGroup, GroupElement, InvalidGroup, canonicalize
from davenport.weights import WeightSet, make_weightset


class CertificateError(ValueError):
    """Certificate cannot be interpreted (bad JSON, wrong element shape)."""


@dataclass
class SumSet:
    """Membership bitmap of Sigma_A(S) over the elements of a group."""

    group: AbelianGroup
    weights: WeightSet
    bits: np.ndarray
    length: int = 0
    _tables: kernels.Tables | None = field(default=None, repr=False, compare=False)

    @classmethod
    def empty(cls, G: AbelianGroup, A: WeightSet) -> "SumSet":
        return cls(G, A, np.zeros(G.order, dtype=np.uint8))

    @property
    def tables(self) -> kernels.Tables:
        if self._tables is None:
            self._tables = kernels.build_tables(self.group, self.weights.residues)
        return self._tables

    def insert(self, g: GroupElement) -> None:
        i = self.group.index(self.group.reduce(g))
        t = self.tables
        if USE_NUMBA:
            out = np.empty_like(self.bits)
            kernels.extend_nb(self.bits, out, i, t.coords, t.moduli, t.strides, t.wmul)
            self.bits = out
        else:
            self.bits = kernels.extend_np(self.bits, i, t)
        self.length += 1

    def __contains__(self, g: GroupElement) -> bool:
        return bool(self.bits[self.group.index(self.group.reduce(g))])

    def has_zero(self) -> bool:
        return bool(self.bits[0])

    def elements(self) -> list[GroupElement]:
        return [self.group.element_at(int(i)) for i in np.flatnonzero(self.bits)]

    def __len__(self) -> int:
        return int(self.bits.sum())


def weighted_sumset(S: Sequence[GroupElement], A: WeightSet, G: AbelianGroup) -> SumSet:
    sig = SumSet.empty(G, A)
    for g in S:
        sig.insert(g)
    return sig


def has_weighted_zero_subsum(S: Sequence[GroupElement], A: WeightSet, G: AbelianGroup) -> bool:
    return weighted_sumset(S, A, G).has_zero()


@dataclass
class Certificate:
    """An explicit sequence claimed to have no A-weighted zero-subsum."""

    group: AbelianGroup
    weights: WeightSet
    elements: list[GroupElement]
    provenance: str = ""

    def __len__(self) -> int:
        return len(self.elements)

    def to_json(self) -> dict:
        return {
            "group": list(self.group.moduli),
            "weights": self.weights.to_json(),
            "elements": [list(e) for e in self.elements],
            "provenance": self.provenance,
        }

    @classmethod
    def from_json(cls, data: dict) -> "Certificate":
        try:
            moduli = data["group"]
            G = canonicalize(moduli)
            if list(G.moduli) != [m for m in moduli if m != 1]:
                raise CertificateError(f"group {moduli} is not in invariant-factor form {list(G.moduli)}")
            A = _weights_from_json(data.get("weights", {"kind": "pm"}), G)
            elements = []
            for e in data["elements"]:
                if not isinstance(e, list) or not all(isinstance(x, int) for x in e):
                    raise CertificateError(f"malformed element {e!r}")
                if len(e) != G.rank:
                    raise CertificateError(f"element {e} has {len(e)} coordinates, group has rank {G.rank}")
                elements.append(tuple(e))
            return cls(G, A, elements, str(data.get("provenance", "")))
        except (KeyError, TypeError, InvalidGroup, ValueError) as exc:
            if isinstance(exc, CertificateError):
                raise
            raise CertificateError(f"malformed certificate: {exc}") from exc

    def dump(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=2) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "Certificate":
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise CertificateError(f"{path}: not JSON ({exc})") from exc
        return cls.from_json(data)


def _weights_from_json(w: dict, G: AbelianGroup) -> WeightSet:
    kind = w.get("kind")
    if kind in ("pm", "full"):
        return make_weightset(kind, G)
    if kind == "set":
        return make_weightset(list(w["values"]), G)
    raise CertificateError(f"unknown weights kind {kind!r}")


@dataclass
class VerifyReport:
    valid: bool
    reason: str = ""
    # a zero-sum: positions into the certificate and the weight used at each
    indices: list[int] = field(default_factory=list)
    weights: list[int] = field(default_factory=list)

    def to_json(self) -> dict:
        out = {"valid": self.valid}
        if not self.valid:
            out["reason"] = self.reason
            if self.indices:
                out["violating_subsum"] = {"indices": self.indices, "weights": self.weights}
        return out


# above this order the zero test runs on a numpy bitmap first
BITMAP_VERIFY_ORDER = 512


def _zero_free_bitmap(cert: Certificate) -> bool:
    """0 not in Sigma_A(S), on a boolean array of sums built with numpy."""
    G, A = cert.group, cert.weights
    coords = G.coords_array()
    moduli = np.array(G.moduli, dtype=np.int64)
    strides = np.array(G.strides, dtype=np.int64)
    reached = np.zeros(G.order, dtype=bool)
    for g in cert.elements:
        new = reached.copy()
        for a in A.residues:
            ag = np.array(G.scale(a, g), dtype=np.int64)
            new[int(ag @ strides)] = True
            members = np.flatnonzero(reached)
            new[((coords[members] + ag) % moduli) @ strides] = True
        if new[0]:
            return False
        reached = new
    return True


def verify_certificate(cert: Certificate) -> VerifyReport:
    """Check 0 is not an A-weighted subsum; otherwise exhibit one that is.

    Works on element tuples with a dictionary of reached sums (a numpy
    bitmap for large groups), so it shares nothing with the search kernels.
    """
    G, A = cert.group, cert.weights
    for pos, e in enumerate(cert.elements):
        if len(e) != G.rank:
            raise CertificateError(f"element {list(e)} has wrong length for {G}")
        if not G.contains(e):
            return VerifyReport(False, f"element {pos} = {list(e)} is not reduced modulo {list(G.moduli)}")
    if G.order > BITMAP_VERIFY_ORDER and _zero_free_bitmap(cert):
        return VerifyReport(True)
    zero = G.zero
    # sum -> (indices, weights) of one nonempty weighted subsum reaching it
    reached: dict[GroupElement, tuple[tuple[int, ...], tuple[int, ...]]] = {}
    for pos, g in enumerate(cert.elements):
        new: dict[GroupElement, tuple[tuple[int, ...], tuple[int, ...]]] = {}
        for a in A.residues:
            ag = G.scale(a, g)
            candidates = [(ag, ((pos,), (a,)))]
            for s, (idx, ws) in reached.items():
                candidates.append((G.add(s, ag), (idx + (pos,), ws + (a,))))
            for s, rep in candidates:
                if s == zero:
                    n = G.exponent
                    ws = [w - n if 2 * w > n else w for w in rep[1]]
                    if A.is_symmetric and ws[0] < 0:
                        ws = [-w for w in ws]
                    return VerifyReport(False, "weighted zero-subsum found", list(rep[0]), ws)
                if s not in reached and s not in new:
                    new[s] = rep
        reached.update(new)
    return VerifyReport(True)
