# -*- coding: utf-8 -*-
from setuptools import setup

package_dir = {'': 'src'}

packages = [
    'taxstop',
    'taxstop.analysis',
    'taxstop.cli',
    'taxstop.misc',
    'taxstop.model',
    'taxstop.montecarlo',
    'taxstop.oracle',
    'taxstop.solvers',
]

package_data = {'': ['*']}

install_requires = [
    'numba>=0.56',
    'numpy>=1.23,<2.0',
    'scipy>=1.9,<2.0',
]

extras_require = {
    'dev': [
        'pre-commit',
        'sphinx',
        'sphinx-copybutton',
        'sphinx_rtd_theme',
        'sphinx-autoapi',
        'pytest',
        'pytest-cov',
        'hypothesis',
        'poetry2setup',
    ]
}

entry_points = {
    'console_scripts': [
        'taxstop = taxstop.cli.main:_main',
    ]
}

setup_kwargs = {
    'name': 'taxstop',
    'version': '0.1.0',
    'description': 'Optimal selling time of a stock under linear capital gains '
    'taxes.',
    'long_description': '# taxstop\n\nSolver library and command-line tool for the '
    'optimal time to sell a stock under linear capital gains taxes.\n',
    'author': 'taxstop developers',
    'package_dir': package_dir,
    'packages': packages,
    'package_data': package_data,
    'install_requires': install_requires,
    'extras_require': extras_require,
    'entry_points': entry_points,
    'python_requires': '>=3.10,<4.0',
}


setup(**setup_kwargs)
