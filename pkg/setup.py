from setuptools import find_packages, setup

with open("README.md", "r") as f:
    long_description = f.read()

setup(
    name="cluspa",
    version="0.1.0",
    description="Exact Laurent expansions of cluster variables of triangulated surfaces, by angle matchings, snake graphs, bipartite graphs and cuts of quivers with potential. ",
    package_dir={"": "app"},
    packages=find_packages(where="app"),
    package_data={"cluspa.test": ["data/*.json"]},
    long_description=long_description,
    long_description_content_type="text/markdown",
    license="MIT",
    classifiers=[
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3.9",
        "Operating System :: OS Independent",
    ],
    install_requires=["networkx>=3.1", "numpy>=1.24.3", "pandas>=2.0.1", "python-dotenv>=1.0.0", "pyvis>=0.3.2"],
    extras_require={
        "dev": ["pytest>=7.0", "twine>=4.0.2", "hypothesis>=6.80", "sympy>=1.12"],
    },
    entry_points={
        "console_scripts": ["cluspa=cluspa.src.cli:main"],
    },
    python_requires=">=3.9.0",
)
