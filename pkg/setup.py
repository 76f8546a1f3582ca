from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "fbmwalk._kernels_cy",
                sources=["src/fbmwalk/_kernels_cy.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        language_level=3,
    )
except ImportError:
    # Pure-Python kernels are a full fallback; the extension is a speedup only.
    ext_modules = []

setup(ext_modules=ext_modules)
