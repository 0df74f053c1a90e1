"""Build the optional compiled kernel.

Without Cython (or a C compiler) the package installs pure-Python only and
``reptile.exact_cover`` falls back to ``_dlx_py`` at import.
"""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("REPTILE_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "reptile.exact_cover._dlx_c",
                    ["src/reptile/exact_cover/_dlx_c.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
