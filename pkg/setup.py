import setuptools

with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

setuptools.setup(
    name="rumorsim",
    version="0.1.0",
    description="Deterministic rumor diffusion on directed social graphs, gated by topic similarity",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=setuptools.find_packages(exclude=['tests']),
    package_data={'rumorsim': ['templates/*.dot']},
    scripts = ['bin/rumorsim'],
    install_requires=[
        'mako',
        'networkx',
        'numpy',
        'pandas>=1.5',
        'pydantic>=2',
        'rapidfuzz',
    ],
    extras_require={
        'tests': ['pytest>=7'],
    },
    classifiers=[
        "Programming Language :: Python :: 3",
        "Operating System :: OS Independent",
    ],
    python_requires='>=3.8',
)
