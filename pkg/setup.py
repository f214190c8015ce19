import setuptools

with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

setuptools.setup(
    name="sparse-fading",
    version="0.1.0",
    description="Sparse signal recovery over fading multiple access channels",
    long_description=long_description,
    long_description_content_type="text/markdown",
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
    ],
    install_requires=[
        'numpy',
        'torch>=1.13',
        'scipy',
        'pandas',
        'PyYAML',
        'tqdm',
        'wandb',
        'einops'
    ],
    packages=setuptools.find_packages(exclude=['examples', 'examples.*']),
    python_requires=">=3.8",
)
