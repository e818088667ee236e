import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("SCREWMECH_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "screwmech._kernels",
                    ["src/screwmech/_kernels.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={
                "language_level": "3",
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
                "initializedcheck": False,
            },
        )
    except ImportError:
        # Cython missing: ship pure-Python only; _backend falls back at import.
        ext_modules = []

setup(ext_modules=ext_modules)
