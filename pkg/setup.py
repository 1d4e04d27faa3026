"""Builds the optional compiled kernels; the package works without them."""

import warnings

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, Cython missing, ...
            warnings.warn(f"coxrep._fast not built, pure-Python kernels will be used: {exc}")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            warnings.warn(f"coxrep._fast not built, pure-Python kernels will be used: {exc}")


try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("coxrep._fast", ["src/coxrep/_fast.pyx"], extra_compile_args=["-O3"])],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules, cmdclass={"build_ext": optional_build_ext})
