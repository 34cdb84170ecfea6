"""Build the optional Cython kernel extension.

The package works without it: trustrec.kernels falls back to the pure
NumPy implementation when the compiled module is missing.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "trustrec.kernels._ckernels",
                ["src/trustrec/kernels/_ckernels.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
