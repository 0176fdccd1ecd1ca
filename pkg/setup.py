"""Build hook for the optional compiled enumeration kernel.

The package works without it: ``indecforms.kernels`` falls back to the
pure-Python kernel when ``indecforms._kernels`` cannot be imported.
Set ``INDECFORMS_NO_EXT=1`` to skip compilation.
"""

import os

from setuptools import setup

ext_modules = []
if not os.environ.get("INDECFORMS_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            ["src/indecforms/_kernels.pyx"],
            compiler_directives={"language_level": "3"},
            quiet=True,
        )

setup(ext_modules=ext_modules)
