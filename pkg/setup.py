"""Build hooks for the optional compiled canonical-code kernel.

The package is pure Python plus one small Cython extension used to speed up
canonical labeling inside searches.  If Cython (or a C compiler) is missing
the build falls back to the pure interpreter kernel; nothing else changes.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/hardsplit/_canon_cy.pyx"],
        language_level="3",
    )
except Exception:
    pass

setup(ext_modules=ext_modules)
