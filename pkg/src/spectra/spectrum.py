"""
Spectrum Module
Truncated eigenvalue multisets with degeneracies and zero-mode bookkeeping
"""

from dataclasses import dataclass, field
from typing import Dict, List

import numpy as np

from config.settings import SPECTRUM_MERGE_TOL
from src.utils.errors import ValidationError


@dataclass
class Spectrum:
    """All eigenvalues up to a cutoff, merged into distinct levels."""
    eigenvalues: np.ndarray
    degeneracies: np.ndarray
    cutoff: float
    zero_mode_count: int = 0
    operator_shift: float = 0.0
    label: str = ""
    notes: List[str] = field(default_factory=list)

    def __post_init__(self):
        self.eigenvalues = np.asarray(self.eigenvalues, dtype=float)
        self.degeneracies = np.asarray(self.degeneracies, dtype=np.int64)
        if self.eigenvalues.shape != self.degeneracies.shape:
            raise ValidationError("Eigenvalues and degeneracies differ in length")
        if self.eigenvalues.size:
            if self.eigenvalues[0] <= 0:
                raise ValidationError("Nonzero eigenvalues must be positive; "
                                      "zero modes go in zero_mode_count")
            if np.any(np.diff(self.eigenvalues) <= 0):
                raise ValidationError("Eigenvalues must be sorted and distinct")
            if self.eigenvalues[-1] > self.cutoff:
                raise ValidationError("Eigenvalue above the cutoff",
                                      details={"cutoff": self.cutoff})

    @classmethod
    def from_values(cls, values, cutoff: float, zero_mode_count: int = 0,
                    operator_shift: float = 0.0, label: str = "",
                    merge_tol: float = SPECTRUM_MERGE_TOL,
                    notes: List[str] = None) -> "Spectrum":
        """
        Build a spectrum from raw eigenvalues (with repeats).

        Values within merge_tol * lambda of their predecessor level are merged
        and their degeneracies summed.
        """
        values = np.sort(np.asarray(values, dtype=float))
        values = values[values <= cutoff]
        levels: List[float] = []
        counts: List[int] = []
        for value in values:
            if levels and value - levels[-1] <= merge_tol * value:
                counts[-1] += 1
            else:
                levels.append(float(value))
                counts.append(1)
        return cls(eigenvalues=np.array(levels), degeneracies=np.array(counts, dtype=np.int64),
                   cutoff=cutoff, zero_mode_count=zero_mode_count,
                   operator_shift=operator_shift, label=label, notes=list(notes or []))

    def __len__(self) -> int:
        return int(self.eigenvalues.size)

    @property
    def mode_count(self) -> int:
        """Number of nonzero modes counted with degeneracy."""
        return int(self.degeneracies.sum())

    def counting_function(self, lam: float) -> int:
        """N(lam): nonzero modes with eigenvalue <= lam, with degeneracy."""
        index = np.searchsorted(self.eigenvalues, lam, side="right")
        return int(self.degeneracies[:index].sum())

    def expanded(self) -> np.ndarray:
        """Eigenvalues repeated by degeneracy."""
        return np.repeat(self.eigenvalues, self.degeneracies)

    def to_records(self) -> List[Dict]:
        return [{"lambda": float(v), "degeneracy": int(d)}
                for v, d in zip(self.eigenvalues, self.degeneracies)]

    def to_record(self) -> Dict:
        return {
            "label": self.label,
            "cutoff": self.cutoff,
            "n0": self.zero_mode_count,
            "shift": self.operator_shift,
            "levels": self.to_records(),
            "notes": self.notes,
        }
