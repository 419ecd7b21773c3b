import time

import numpy as np


def rand_complex(rng, n):
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)


# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE: list[str] = []


class criterion:
    """Record PASS or FAIL for a block of acceptance checks, with its runtime."""

    def __init__(self, number: int, title: str):
        self.number, self.title = number, title
        self.notes: list[str] = []

    def note(self, text: str):
        self.notes.append(text)

    @property
    def elapsed(self) -> float:
        return time.perf_counter() - self._t0

    def __enter__(self):
        self._t0 = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        parts = list(self.notes)
        if exc_type is not None:
            msg = str(exc).splitlines()[0] if str(exc) else ""
            parts.append(f"{exc_type.__name__}: {msg}")
        status = "PASS" if exc_type is None else "FAIL"
        line = f"criterion {self.number} [{status}] {self.title} ({self.elapsed:.1f} s)"
        if parts:
            line += ": " + "; ".join(parts)
        ACCEPTANCE.append(line)
        print(line)
        return False
