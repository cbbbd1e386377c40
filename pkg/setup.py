from setuptools import setup

setup(
    name='pyHOIF',
    packages=['pyHOIF', 'pyHOIF.basis', 'pyHOIF.benchmarks', 'pyHOIF.common', 'pyHOIF.data', 'pyHOIF.estimators',
              'pyHOIF.models', 'pyHOIF.nuisance', 'pyHOIF.tests', 'pyHOIF.ustat'],
    version='0.1.0',
    description='Higher order influence function estimators for Python',
    keywords=['semiparametric', 'influence functions', 'U-statistics', 'doubly robust', 'causal inference'],
    install_requires=['numpy', 'pandas', 'scipy', 'statsmodels', 'joblib', 'tqdm', 'dill'],
    extras_require={'tests': ['pytest']},
    entry_points={'console_scripts': ['pyHOIF = pyHOIF.cli:cli_main']},
    classifiers=[
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11',
    ],
)
