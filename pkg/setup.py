import os

from setuptools import Extension, setup

# PTOQS_MARCH_NATIVE=1 tunes the kernel for the build machine (not portable)
COMPILE_ARGS = ["-O3"] + (["-march=native"] if os.environ.get("PTOQS_MARCH_NATIVE") == "1" else [])

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "ptoqs._kernels",
                ["src/ptoqs/_kernels.pyx"],
                extra_compile_args=COMPILE_ARGS,
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
