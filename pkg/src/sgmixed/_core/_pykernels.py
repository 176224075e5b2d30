"""NumPy element kernels (reference implementation and fallback)."""
import numpy as np


def local_blocks(g, H, w, psi, gpsi):
    """Per-element blocks of the strain, strain-gradient and coupling forms.

    Parameters
    ----------
    g : (ne, nq, nb, 2)  shape-function gradients
    H : (ne, nq, nb, 2, 2)  shape-function Hessians
    w : (ne, nq)  quadrature weights times element area
    psi : (nq, 3)  P1 pressure shape values
    gpsi : (ne, 3, 2)  P1 pressure gradients

    Returns
    -------
    A_eps, A_geps : (ne, 2 nb, 2 nb)
        ``(eps(v), eps(w))`` and ``(grad eps(v), grad eps(w))``; local vector
        DoFs are component 0 then component 1.
    B0, B2 : (ne, 3, 2 nb)
        ``(div v, q)`` and ``(grad div v, grad q)``.
    """
    g = np.asarray(g, dtype=float)
    H = np.asarray(H, dtype=float)
    ne, nq, nb, _ = g.shape
    GG = np.einsum("eq,eqax,eqbx->eab", w, g, g)
    GX = np.einsum("eq,eqad,eqbc->eabcd", w, g, g)
    HH = np.einsum("eq,eqaxy,eqbxy->eab", w, H, H)
    HX = np.einsum("eq,eqadk,eqbkc->eabcd", w, H, H)

    A_eps = np.empty((ne, 2 * nb, 2 * nb))
    A_geps = np.empty((ne, 2 * nb, 2 * nb))
    for c in range(2):
        for d in range(2):
            blk = 0.5 * GX[:, :, :, c, d]
            hblk = 0.5 * HX[:, :, :, c, d]
            if c == d:
                blk = blk + 0.5 * GG
                hblk = hblk + 0.5 * HH
            A_eps[:, c * nb:(c + 1) * nb, d * nb:(d + 1) * nb] = blk
            A_geps[:, c * nb:(c + 1) * nb, d * nb:(d + 1) * nb] = hblk

    B0 = np.einsum("eq,qp,eqac->epca", w, psi, g).reshape(ne, 3, 2 * nb)
    B2 = np.einsum("eq,epx,eqaxc->epca", w, gpsi, H).reshape(ne, 3, 2 * nb)
    return A_eps, A_geps, B0, B2
