"""Setup for pynd package."""
import setuptools
import os

# get __version__ from _version.py
ver_file = os.path.join('pynd', '_version.py')
with open(ver_file) as f:
    exec(f.read())


NAME = 'pynd'


VERSION = __version__


AUTHOR = 'pynd developers'


DESCRIPTION = 'Parallel (r, s) nucleus decomposition of graphs'


with open('README.md', 'r') as fh:
    LONG_DESCRIPTION = fh.read()


LICENSE = 'MIT'


CLASSIFIERS = ['Intended Audience :: Science/Research',
               'Intended Audience :: Developers',
               'License :: OSI Approved :: MIT License',
               'Natural Language :: English',
               'Programming Language :: Python',
               'Topic :: Software Development',
               'Topic :: Scientific/Engineering :: Mathematics',
               'Operating System :: OS Independent',
               'Programming Language :: Python :: 3.7',
               'Programming Language :: Python :: 3.8']


INSTALL_REQUIRES = ['numpy', 'scipy', 'pandas', 'numba']


EXTRAS_REQUIRE = {
    'tests': [
        'pytest',
        'pytest-cov',
        'networkx',
    ],
    'docs': [
        'sphinx',
        'sphinx-gallery',
        'sphinx_rtd_theme',
        'numpydoc'
    ]
}


ENTRY_POINTS = {
    'console_scripts': [
        'pynd = pynd.cli:main',
    ],
}


setuptools.setup(
    name=NAME,
    version=VERSION,
    author=AUTHOR,
    description=DESCRIPTION,
    long_description=LONG_DESCRIPTION,
    long_description_content_type="text/markdown",
    license=LICENSE,
    packages=setuptools.find_packages(exclude=['tests']),
    classifiers=CLASSIFIERS,
    python_requires='>=3.7',
    install_requires=INSTALL_REQUIRES,
    extras_require=EXTRAS_REQUIRE,
    entry_points=ENTRY_POINTS,
)
