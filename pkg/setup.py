"""Build script for the optional compiled simulation kernel.

The package works without the extension (a vectorised numpy fallback is
selected at import time), so a missing C compiler only costs speed.
"""

from setuptools import setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Build the Cython kernel if possible; fall back to pure Python."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler or toolchain missing
            print(f"warning: compiled kernel skipped ({exc}); "
                  "using the pure-Python simulation backend")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: could not build {ext.name} ({exc}); "
                  "using the pure-Python simulation backend")


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    return cythonize(
        ["src/macaoi/sim/_kernel.pyx"],
        language_level=3,
        compiler_directives={"boundscheck": False, "wraparound": False},
    )


setup(
    ext_modules=extensions(),
    cmdclass={"build_ext": OptionalBuildExt},
)
