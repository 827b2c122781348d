#! /usr/bin/env python
'''
rerankd setup script
'''
from setuptools import setup, find_packages


def readme():
    with open('README.rst') as f:
        return f.read()

# The version number is derived from git tags by setuptools_scm
setup(name='rerankd',
      use_scm_version=True,
      setup_requires=['setuptools_scm'],
      packages=find_packages(),
      install_requires=['numpy>=1.17',
                        'matplotlib>=3.0',
                        'setuptools',
                        'setuptools_scm'],
      provides=['rerankd'],
      extras_require={'test': ['pytest'],
                      'docs': ['sphinx>=1.7']},
      entry_points={'console_scripts': ['rerankd = rerankd.__main__:main']},
      description='Question answering with BM25 retrieval and a convolutional '
                  'sentence reranker',
      long_description=readme(),
      classifiers=[
          'Development Status :: 4 - Beta',
          'Intended Audience :: Science/Research',
          'Natural Language :: English',
          'Operating System :: OS Independent',
          'Programming Language :: Python',
          'Programming Language :: Python :: 3',
          'Topic :: Scientific/Engineering :: Artificial Intelligence',
          'Topic :: Text Processing :: Indexing'
      ],
      keywords='question-answering retrieval bm25 reranking',
      python_requires='>=3.8'
      )
