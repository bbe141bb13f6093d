from setuptools import setup, find_packages

setup(
    name='tailbound',
    version='0.1.0',
    packages=find_packages('src'),
    package_dir={'': 'src'},
    python_requires='>=3.8',
    install_requires=[
        'numpy>=1.22.2',
        'scipy>=1.10.1',
        'pandas>=1.5.3',
        'line_profiler>=4.0.0',
    ],
    extras_require={'test': ['pytest>=4.6.9', 'hypothesis>=6.60.0']},
    entry_points={'console_scripts': ['tailbound=tailbound.cli:main']},
    scripts=['scripts/tailbound'],
)
