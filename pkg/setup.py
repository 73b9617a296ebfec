"""Build script: compiles the optional lattice-kernel extension.

The extension is a pure speedup; if Cython or a C compiler is missing the
install proceeds and the package falls back to its numpy kernels at import.
"""

import warnings

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """build_ext that degrades to a no-extension install on failure."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, bad toolchain, ...
            warnings.warn(f"skipping compiled kernels ({exc}); "
                          "falling back to numpy implementations")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            warnings.warn(f"failed to build {ext.name} ({exc}); "
                          "falling back to numpy implementations")


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    return cythonize(
        [Extension("foresight._kernels", ["src/foresight/_kernels.pyx"])],
        language_level=3,
    )


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
