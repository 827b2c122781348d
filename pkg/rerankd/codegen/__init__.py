"""
Ahead-of-time compilation of a model into a standalone evaluator program.
"""
from .generator import (GenOptions, GeneratedSource, EvaluatorGenerator,
                        generate_evaluator, write_source, load_evaluator)
from .conformance import (ConformanceReport, relative_error,
                          compile_and_run_conformance)

__all__ = ['GenOptions', 'GeneratedSource', 'EvaluatorGenerator',
           'generate_evaluator', 'write_source', 'load_evaluator',
           'ConformanceReport', 'relative_error',
           'compile_and_run_conformance']
