"""1-Lipschitz test functions f: R^d -> R."""

from __future__ import annotations

import numpy as np

# slack of the Lipschitz spot check
LIPSCHITZ_SLACK = 1e-12


class LipschitzFunction:
    """A 1-Lipschitz function, one of norm, linear(u) with |u| = 1, or distance_to(p).

    Args:
        tag (str): "norm", "linear" or "distance_to".
        vector (list[float]): the unit vector u, or the point p.
    """

    TAGS = ("norm", "linear", "distance_to")

    def __init__(self, tag: str, vector=None) -> None:
        if tag not in self.TAGS:
            raise ValueError(f"unknown Lipschitz function {tag!r}, expected one of {self.TAGS}")
        self.tag = tag
        self.vector = None if vector is None else np.asarray(vector, dtype=float).reshape(-1)
        if tag == "norm":
            if vector is not None:
                raise ValueError("the norm takes no vector")
        elif self.vector is None:
            raise ValueError(f"{tag} needs a vector")
        elif tag == "linear" and not np.isclose(np.linalg.norm(self.vector), 1.0, rtol=0, atol=1e-12):
            raise ValueError("linear(u) needs a unit vector u")

    @classmethod
    def norm(cls) -> LipschitzFunction:
        return cls("norm")

    @classmethod
    def linear(cls, u) -> LipschitzFunction:
        return cls("linear", u)

    @classmethod
    def distance_to(cls, p) -> LipschitzFunction:
        return cls("distance_to", p)

    def __repr__(self) -> str:
        if self.vector is None:
            return f"LipschitzFunction({self.tag!r})"
        return f"LipschitzFunction({self.tag!r}, {self.vector.tolist()!r})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, LipschitzFunction) or self.tag != other.tag:
            return False
        if self.vector is None:
            return other.vector is None
        return other.vector is not None and np.array_equal(self.vector, other.vector)

    def __hash__(self) -> int:
        return hash((self.tag, None if self.vector is None else tuple(self.vector)))

    def __call__(self, values) -> np.ndarray:
        """Evaluates f on the rows of an (n, d) array, or on a single point."""
        points = np.atleast_2d(np.asarray(values, dtype=float))
        if self.vector is not None and points.shape[1] != self.vector.size:
            raise ValueError(
                f"{self!r} acts on dimension {self.vector.size}, got points of dimension {points.shape[1]}"
            )
        if self.tag == "norm":
            result = np.linalg.norm(points, axis=1)
        elif self.tag == "linear":
            result = points @ self.vector
        else:
            result = np.linalg.norm(points - self.vector, axis=1)
        return result if np.ndim(values) > 1 else result[0]

    def at_origin(self, dimension: int) -> float:
        return float(self(np.zeros((1, dimension)))[0])

    def spot_check(self, dimension: int, pairs: int = 1000, seed: int = 0) -> bool:
        """Checks |f(x) - f(y)| <= |x - y| on random pairs of points."""
        generator = np.random.default_rng(seed)
        x = generator.standard_cauchy((pairs, dimension))
        y = x + generator.standard_normal((pairs, dimension))
        gaps = np.abs(self(x) - self(y))
        return bool(np.all(gaps <= np.linalg.norm(x - y, axis=1) + LIPSCHITZ_SLACK))

    def describe(self) -> str:
        if self.vector is None:
            return self.tag
        return f"{self.tag}({','.join(repr(float(v)) for v in self.vector)})"


def parse_lipschitz(text: str, dimension: int = 1) -> LipschitzFunction:
    """Parses "norm", "linear" (u = e_1), "linear(u1,...)" or "distance_to(p1,...)"."""
    text = text.strip()
    if text in ("norm", "abs"):
        return LipschitzFunction.norm()
    if text == "linear":
        return LipschitzFunction.linear(np.eye(dimension)[0])
    name, _, rest = text.partition("(")
    if not rest.endswith(")"):
        raise ValueError(f"cannot parse the Lipschitz function {text!r}")
    vector = [float(value) for value in rest[:-1].split(",")]
    return LipschitzFunction(name.strip(), vector)
