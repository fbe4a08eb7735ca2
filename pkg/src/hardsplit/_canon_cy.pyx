# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled walk-code kernel; drop-in for `_canon_py.best_walk`."""

from libc.stdlib cimport free, malloc
from libc.string cimport memcmp


def best_walk(theta, deco, starts):
    """Smallest walk code over the given start darts, and all its achievers."""
    cdef Py_ssize_t nd = len(theta)
    cdef Py_ssize_t m = len(starts)
    if m == 0:
        return b"", []
    cdef int *th = <int *> malloc(nd * sizeof(int))
    cdef unsigned char *de = <unsigned char *> malloc(nd)
    cdef int *dom = <int *> malloc(m * sizeof(int))
    cdef int *lab = <int *> malloc(nd * sizeof(int))
    cdef int *order = <int *> malloc(m * sizeof(int))
    cdef unsigned char *buf = <unsigned char *> malloc(3 * m)
    cdef unsigned char *best = <unsigned char *> malloc(3 * m)
    if th is NULL or de is NULL or dom is NULL or lab is NULL \
            or order is NULL or buf is NULL or best is NULL:
        free(th); free(de); free(dom); free(lab)
        free(order); free(buf); free(best)
        raise MemoryError()
    cdef Py_ssize_t i, j, nlab, head
    cdef int d, nb, s, cmpres
    cdef list argmin = []
    try:
        for i in range(nd):
            th[i] = theta[i]
            de[i] = deco[i]
            lab[i] = -2
        for i in range(m):
            dom[i] = starts[i]
        for j in range(m):
            s = dom[j]
            # breadth-first numbering from s over the piece's darts
            for i in range(m):
                lab[dom[i]] = -1
            lab[s] = 0
            order[0] = s
            nlab = 1
            head = 0
            while head < nlab:
                d = order[head]
                head += 1
                nb = (d & ~3) | ((d + 1) & 3)
                if lab[nb] == -1:
                    lab[nb] = <int> nlab
                    order[nlab] = nb
                    nlab += 1
                nb = th[d]
                if lab[nb] == -1:
                    lab[nb] = <int> nlab
                    order[nlab] = nb
                    nlab += 1
            if nlab != m:
                raise ValueError("starts must be the darts of one connected piece")
            for i in range(m):
                d = order[i]
                buf[3 * i] = <unsigned char> lab[(d & ~3) | ((d + 1) & 3)]
                buf[3 * i + 1] = <unsigned char> lab[th[d]]
                buf[3 * i + 2] = de[d]
            if j == 0:
                cmpres = -1
            else:
                cmpres = memcmp(buf, best, 3 * m)
            if cmpres < 0:
                for i in range(3 * m):
                    best[i] = buf[i]
                argmin = [s]
            elif cmpres == 0:
                argmin.append(s)
        return best[:3 * m], argmin
    finally:
        free(th); free(de); free(dom); free(lab)
        free(order); free(buf); free(best)
