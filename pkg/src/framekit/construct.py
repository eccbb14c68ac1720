"""Small frame constructors used by the CLI, tests and examples."""
import numpy as np

from .frame import Frame, as_frame, frame_operator


def mercedes_benz() -> Frame:
    """Three unit vectors in R^2 at 120 degrees; 3/2-tight."""
    angles = np.pi / 2 + 2 * np.pi * np.arange(3) / 3
    return Frame(np.column_stack([np.cos(angles), np.sin(angles)]))


def orthonormal_basis(n: int, field: str = "real") -> Frame:
    return Frame(np.eye(n), field)


def harmonic_frame(k: int, n: int, field: str = "complex") -> Frame:
    """Unit-norm tight frame of k vectors built from n rows of the k-point DFT.

    The real variant (even n only, or n == 2 with angles pi*j/k) uses
    cosine/sine pairs.
    """
    if k < n:
        raise ValueError("harmonic frames need k >= n")
    if field == "complex":
        j = np.arange(k)[:, None]
        l = np.arange(n)[None, :]
        return Frame(np.exp(2j * np.pi * j * l / k) / np.sqrt(n), "complex")
    if n == 2:
        angles = np.pi * np.arange(k) / k
        return Frame(np.column_stack([np.cos(angles), np.sin(angles)]))
    if n % 2:
        raise ValueError("real harmonic frames are built for even n (or n == 2)")
    j = np.arange(k)[:, None]
    freqs = np.arange(1, n // 2 + 1)[None, :]
    cols = np.empty((k, n))
    cols[:, 0::2] = np.cos(2 * np.pi * j * freqs / k)
    cols[:, 1::2] = np.sin(2 * np.pi * j * freqs / k)
    return Frame(cols * np.sqrt(2 / n))


def canonical_tight(F) -> Frame:
    """The Parseval frame S^{-1/2} f_i associated with a frame."""
    F = as_frame(F)
    w, u = np.linalg.eigh(frame_operator(F))
    if w.min() <= 0:
        raise ValueError("canonical tight frame needs a spanning set")
    inv_sqrt = (u * (1 / np.sqrt(w))) @ u.conj().T
    return Frame(F.vectors @ inv_sqrt.T, F.field)


def random_frame(k: int, n: int, field: str = "real", rng=None) -> Frame:
    rng = np.random.default_rng(rng)
    v = rng.standard_normal((k, n))
    if field == "complex":
        v = v + 1j * rng.standard_normal((k, n))
    return Frame(v, field)


def random_orthonormal_basis(n: int, field: str = "real", rng=None) -> Frame:
    rng = np.random.default_rng(rng)
    a = random_frame(n, n, field, rng).vectors
    q, _ = np.linalg.qr(a)
    return Frame(q.T, field)
