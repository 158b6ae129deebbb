"""Build script.

The compiled product kernel is optional: if Cython or a C compiler is
unavailable (or REDUP_NO_EXT is set), the package installs without it and
falls back to the pure-Python kernel at import time.
"""

import os

from setuptools import setup

ext_modules = []
if not os.environ.get("REDUP_NO_EXT") and os.path.exists("src/redup/_product_c.pyx"):
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [Extension("redup._product_c", ["src/redup/_product_c.pyx"])],
            compiler_directives={
                "language_level": 3,
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
            },
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
