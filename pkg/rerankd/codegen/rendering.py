'''
Rendering of Python literals for generated source code. Every renderer is
deterministic: the same value always gives the same text.
'''
import math

__all__ = ['render_float', 'render_int', 'render_str', 'render_float_tuple',
           'render_dict', 'render_frozenset']

FLOATS_PER_LINE = 4
INDENT = '    '


def render_float(value):
    '''
    Shortest decimal that parses back to exactly ``value``.

    Raises
    ------
    ValueError
        For NaN and infinite values, which have no literal.
    '''
    value = float(value)
    if not math.isfinite(value):
        raise ValueError('Cannot render non-finite value %r' % value)
    return repr(value)


def render_int(value):
    return '%d' % int(value)


def render_str(value):
    # ascii() escapes everything outside of ASCII, the text stays 7 bit
    return ascii(str(value))


def render_float_tuple(name, values, per_line=FLOATS_PER_LINE):
    '''
    Assignment of ``values`` as a tuple literal, ``per_line`` values per
    line, each followed by a comma.
    '''
    values = [render_float(v) for v in values]
    lines = ['%s = (' % name]
    for start in range(0, len(values), per_line):
        lines.append(INDENT + ' '.join(v + ','
                                       for v in values[start:start + per_line]))
    lines.append(')')
    return '\n'.join(lines) + '\n'


def render_dict(name, mapping, render_value=None):
    '''
    Assignment of a dict literal with string keys in sorted order, one item
    per line.
    '''
    if render_value is None:
        render_value = render_int
    lines = ['%s = {' % name]
    for key in sorted(mapping):
        lines.append('%s%s: %s,' % (INDENT, render_str(key),
                                    render_value(mapping[key])))
    lines.append('}')
    return '\n'.join(lines) + '\n'


def render_frozenset(name, items):
    if not items:
        return '%s = frozenset()\n' % name
    lines = ['%s = frozenset({' % name]
    for item in sorted(items):
        lines.append('%s%s,' % (INDENT, render_str(item)))
    lines.append('})')
    return '\n'.join(lines) + '\n'
