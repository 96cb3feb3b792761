from setuptools import setup, find_packages
import pathlib

here = pathlib.Path(__file__).parent.resolve()

# Get the long description from the README file
long_description = (here / 'README.md').read_text(encoding='utf-8')


setup(
    name='PyThinFlow',
    version='0.1.0',
    description='Numerical laboratory for compressible barotropic Navier-Stokes flows in thin channels',
    long_description=long_description,
    long_description_content_type='text/markdown',
    author='The PyThinFlow developers',
    classifiers=[
        'Intended Audience :: Science/Research',
        'Topic :: Scientific/Engineering',
        'License :: OSI Approved :: GNU General Public License v3 (GPLv3)',
        'Programming Language :: Python :: 3',
    ],
    keywords='Compressible flows, Navier-Stokes, Thin domains, Numerical Simulation',
    packages=find_packages(include=['PyThinFlow', 'PyThinFlow.*']),
    include_package_data=True,
    python_requires='>=3.9, <4',
    install_requires=[
        'numpy',
        'scipy>=1.12',
        'pandas>=1.5',
        'matplotlib',
        'prettytable',
    ],
    extras_require={
        'vtu': ['meshio'],
        'test': ['pytest'],
    },
    entry_points={
        'console_scripts': ['pythinflow=PyThinFlow.cli:main'],
    },
)
