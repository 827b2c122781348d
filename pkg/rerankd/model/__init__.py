"""
The portable model container, its file format and deterministic
initialization.
"""
from .bundle import (ModelValidationError, MissingParameterError,
                     ReshapeError, FormatVersionError, PARAM_NAMES,
                     ParamRecord, ModelConfig, ModelBundle, expected_dims,
                     init_model)
from .serialization import save_model, load_model, config_to_dict
from .prng import SplitMix64

__all__ = ['ModelValidationError', 'MissingParameterError', 'ReshapeError',
           'FormatVersionError', 'PARAM_NAMES', 'ParamRecord', 'ModelConfig',
           'ModelBundle', 'expected_dims', 'init_model', 'save_model',
           'load_model', 'config_to_dict', 'SplitMix64']
