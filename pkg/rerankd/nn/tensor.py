'''
Dense linear algebra kernels used by the reranker: matrix multiplication,
im2col expansion, wide convolution, ReLU and column-wise max-pooling.

A "tensor" is a read-only, row-major `numpy.ndarray` of 64-bit floats. All
functions are pure: they never modify their arguments and always return
new read-only arrays.
'''
import numpy as np

__all__ = ['ShapeError', 'as_tensor', 'from_flat', 'gemm', 'im2col_wide',
           'flatten_filters', 'conv_wide', 'conv_wide_direct', 'relu',
           'maxpool_cols']


class ShapeError(ValueError):
    '''
    Raised when the shapes of the operands of a kernel do not fit together.
    '''
    pass


def _freeze(arr):
    arr = np.ascontiguousarray(arr, dtype=np.float64)
    arr.setflags(write=False)
    return arr


def as_tensor(values, ndim=None):
    '''
    Convert ``values`` into a read-only ``float64`` tensor.

    Parameters
    ----------
    values : array_like
        Nested sequences or an array.
    ndim : int, optional
        The required number of dimensions.

    Returns
    -------
    tensor : `~numpy.ndarray`
    '''
    arr = np.array(values, dtype=np.float64)
    if arr.ndim == 0:
        raise ShapeError('A tensor needs at least one dimension')
    if ndim is not None and arr.ndim != ndim:
        raise ShapeError('Expected a %d-dimensional tensor, got shape %s'
                         % (ndim, arr.shape))
    if arr.size == 0:
        raise ShapeError('Every dimension of a tensor has to be >= 1, '
                         'got shape %s' % (arr.shape, ))
    return _freeze(arr)


def from_flat(dims, data):
    '''
    Restore a tensor from its one-dimensional storage and its dimensions.

    Parameters
    ----------
    dims : sequence of int
        The dimensions, each >= 1.
    data : sequence of float
        Flat row-major data, ``product(dims)`` values.

    Returns
    -------
    tensor : `~numpy.ndarray`
    '''
    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 1 for d in dims):
        raise ShapeError('Invalid dimensions %s' % (dims, ))
    flat = np.asarray(data, dtype=np.float64).ravel()
    if flat.size != int(np.prod(dims)):
        raise ShapeError('Cannot reshape %d values into shape %s'
                         % (flat.size, dims))
    return _freeze(flat.reshape(dims))


def gemm(a, b):
    '''
    General matrix-matrix multiplication ``C = A B``.

    Parameters
    ----------
    a : array_like
        Matrix of shape ``(m, k)``.
    b : array_like
        Matrix of shape ``(k, n)``.

    Returns
    -------
    c : `~numpy.ndarray`
        Matrix of shape ``(m, n)``.
    '''
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise ShapeError('Cannot multiply matrices of shape %s and %s'
                         % (a.shape, b.shape))
    return _freeze(np.matmul(a, b))


def im2col_wide(x, w):
    '''
    Unroll all windows of a wide convolution into the columns of a matrix.

    The input is padded with ``w - 1`` zero columns on both sides. Column
    ``j`` of the result stacks the padded columns ``j - (w - 1)`` to ``j``
    of ``x``: rows ``o*d`` to ``o*d + d - 1`` hold the padded column
    ``j - (w - 1) + o``.

    Parameters
    ----------
    x : array_like
        Sentence matrix of shape ``(d, L)``.
    w : int
        The window (filter) width.

    Returns
    -------
    cols : `~numpy.ndarray`
        Matrix of shape ``(d*w, L + w - 1)``.
    '''
    x = np.asarray(x, dtype=np.float64)
    if int(w) != w or w < 1:
        raise ValueError('Window width has to be a positive integer, '
                         'got %r' % (w, ))
    w = int(w)
    if x.ndim != 2 or x.size == 0:
        raise ValueError('im2col needs a non-empty matrix, got shape %s'
                         % (x.shape, ))
    d, length = x.shape
    n_cols = length + w - 1
    padded = np.zeros((d, length + 2 * (w - 1)))
    padded[:, w - 1:w - 1 + length] = x
    cols = np.empty((d * w, n_cols))
    for offset in range(w):
        cols[offset * d:(offset + 1) * d, :] = padded[:, offset:offset + n_cols]
    return _freeze(cols)


def flatten_filters(filters):
    '''
    Lay out a filter tensor of shape ``(k, d, w)`` as a ``(k, d*w)`` matrix
    whose columns follow the row order of `im2col_wide` (offset major,
    embedding dimension minor).
    '''
    filters = np.asarray(filters, dtype=np.float64)
    if filters.ndim != 3:
        raise ShapeError('Filters need shape (k, d, w), got %s'
                         % (filters.shape, ))
    k, d, w = filters.shape
    return _freeze(filters.transpose(0, 2, 1).reshape(k, w * d))


def _check_conv_args(x, filters, bias):
    x = np.asarray(x, dtype=np.float64)
    filters = np.asarray(filters, dtype=np.float64)
    bias = np.asarray(bias, dtype=np.float64)
    if filters.ndim != 3:
        raise ShapeError('Filters need shape (k, d, w), got %s'
                         % (filters.shape, ))
    if x.ndim != 2 or x.shape[0] != filters.shape[1]:
        raise ShapeError('Filter depth does not match the input: filters %s, '
                         'input %s' % (filters.shape, x.shape))
    if bias.shape != (filters.shape[0], ):
        raise ShapeError('Bias of shape %s does not match filters %s'
                         % (bias.shape, filters.shape))
    return x, filters, bias


def conv_wide(x, filters, bias):
    '''
    Wide convolution (stride 1, zero padding) computed as a single matrix
    multiplication of the flattened filters with `im2col_wide`.

    Parameters
    ----------
    x : array_like
        Sentence matrix of shape ``(d, L)``.
    filters : array_like
        Filter tensor of shape ``(k, d, w)``.
    bias : array_like
        Bias vector of length ``k``.

    Returns
    -------
    feature_maps : `~numpy.ndarray`
        Matrix of shape ``(k, L + w - 1)``.
    '''
    x, filters, bias = _check_conv_args(x, filters, bias)
    cols = im2col_wide(x, filters.shape[2])
    out = np.matmul(flatten_filters(filters), cols)
    out += bias[:, np.newaxis]
    return _freeze(out)


def conv_wide_direct(x, filters, bias):
    '''
    Same result as `conv_wide`, computed the straightforward way: every
    filter is slid over the sentence matrix on its own. Kept as the slow
    reference strategy for benchmarks.
    '''
    x, filters, bias = _check_conv_args(x, filters, bias)
    k, d, w = filters.shape
    length = x.shape[1]
    padded = np.zeros((d, length + 2 * (w - 1)))
    padded[:, w - 1:w - 1 + length] = x
    out = np.empty((k, length + w - 1))
    for f in range(k):
        for j in range(length + w - 1):
            out[f, j] = np.sum(filters[f] * padded[:, j:j + w]) + bias[f]
    return _freeze(out)


def relu(t):
    '''
    Elementwise ``max(0, x)``, shape preserved.
    '''
    return _freeze(np.maximum(np.asarray(t, dtype=np.float64), 0.0))


def maxpool_cols(m):
    '''
    Maximum over the columns of each row.

    Parameters
    ----------
    m : array_like
        Matrix of shape ``(k, L)`` with ``L >= 1``.

    Returns
    -------
    pooled : `~numpy.ndarray`
        Vector of length ``k``.
    '''
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2:
        raise ShapeError('Max-pooling needs a matrix, got shape %s'
                         % (m.shape, ))
    if m.shape[1] == 0:
        raise ValueError('Cannot max-pool a matrix without columns')
    return _freeze(m.max(axis=1))
