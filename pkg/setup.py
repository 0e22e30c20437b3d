"""Setup for the qfibound package."""

from setuptools import setup,find_packages

__pkg_name__ = 'qfibound'


with open('README.md') as f:
    README = f.read()

setup(
    name=__pkg_name__,
    license="MIT",
    description='qfibound is a python package for variational bounds on the quantum Fisher information of mixed probe states.',
    version='v1.0.0',
    long_description=README,
    long_description_content_type='text/markdown',
    packages=find_packages(exclude=['tests']),
    include_package_data=True,
    install_requires=[
            'numpy>=1.18.0',
            'pandas>=0.25.3',
            'scipy>=1.4.1',
            'PyYAML',
            'h5py>=2.10.0',
            'ujson>=4.0.1',
            'matplotlib>=3.3'
            ],
    extras_require={'test': ['pytest>=6.0', 'hypothesis>=5.0']},
    python_requires=">=3.8",
    entry_points={'console_scripts': ["qfibound={}.scripts.qfibound:main".format(__pkg_name__)]},
    classifiers=[
        # Trove classifiers
        # (https://pypi.python.org/pypi?%3Aaction=list_classifiers)
        'Development Status :: 3 - Alpha',
        'License :: OSI Approved :: MIT License',
        'Programming Language :: Python',
        'Programming Language :: Python :: 3.8',
        'Topic :: Scientific/Engineering :: Physics',
        'Intended Audience :: Science/Research',
    ],
)
