"""Build hooks: compile the RK4 kernel extension when a toolchain is present.

The package works without the extension; drivenjc._kernels falls back to a
NumPy implementation at import time. Any build failure here therefore only
costs speed, never functionality.
"""

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Swallow compiler failures so a source install still succeeds."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        import warnings

        warnings.warn(
            f"compiled kernel skipped ({exc!r}); using the NumPy fallback",
            stacklevel=1,
        )


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "drivenjc._kernels._rk4",
        sources=["src/drivenjc/_kernels/_rk4.pyx"],
    )
    return cythonize([ext], language_level=3)


setup(
    ext_modules=extensions(),
    cmdclass={"build_ext": optional_build_ext},
)
