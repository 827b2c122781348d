"""
Dense kernels and the reranker interpreter.
"""
from .tensor import (ShapeError, as_tensor, from_flat, gemm, im2col_wide,
                     flatten_filters, conv_wide, conv_wide_direct, relu,
                     maxpool_cols)
from .inference import (CONV_STRATEGIES, BatchScoringError, embed,
                        arm_forward, join_vector, forward, score_batch,
                        rerank, Scorer)

__all__ = ['ShapeError', 'as_tensor', 'from_flat', 'gemm', 'im2col_wide',
           'flatten_filters', 'conv_wide', 'conv_wide_direct', 'relu',
           'maxpool_cols', 'CONV_STRATEGIES', 'BatchScoringError', 'embed',
           'arm_forward', 'join_vector', 'forward', 'score_batch', 'rerank',
           'Scorer']
