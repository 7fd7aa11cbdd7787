import os

from setuptools import Extension, setup

# The compiled kernel is optional: without Cython (or with VOLPROD_NO_EXT=1)
# the package installs pure-Python and volprod.kernels falls back at import.
# -ffp-contract=off keeps the C arithmetic bit-identical to the fallback.
ext_modules = []
if os.environ.get("VOLPROD_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "volprod._kernels_cy",
                    ["src/volprod/_kernels_cy.pyx"],
                    extra_compile_args=["-O3", "-ffp-contract=off"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
