'''
Reading corpora and persisting an `InvertedIndex` in the ``IDX1`` text
format::

    IDX1
    <doc_id>\t<length>\t<base64 of the UTF-8 text>     (one line per document)
    <term>\t<doc_id>:<tf>,<doc_id>:<tf>,...          (one line per term)

Documents come first, sorted by id, then terms in sorted order. UTF-8, LF
line endings. Document ids are stored as strings.
'''
import base64
import io

from ..logger import get_logger
from .index import InvertedIndex

__all__ = ['INDEX_HEADER', 'read_corpus', 'save_index', 'load_index']

logger = get_logger(__name__)

INDEX_HEADER = 'IDX1'


def read_corpus(filename):
    '''
    Read a corpus file with one document per line, ``doc_id<TAB>text``.
    Blank lines are skipped.

    Returns
    -------
    docs : list of tuple
        ``(doc_id, text)`` pairs, ids as strings.
    '''
    docs = []
    with io.open(filename, 'r', encoding='utf-8', newline='\n') as f:
        for line_no, line in enumerate(f, start=1):
            line = line.rstrip('\r\n')
            if not line.strip():
                continue
            doc_id, sep, text = line.partition('\t')
            if not sep or not doc_id:
                raise ValueError('%s:%d: expected "doc_id<TAB>text"'
                                 % (filename, line_no))
            docs.append((doc_id, text))
    logger.debug('Read %d documents from "%s"' % (len(docs), filename))
    return docs


def _check_doc_id(doc_id):
    doc_id = str(doc_id)
    if not doc_id or any(c in doc_id for c in '\t\n\r,'):
        raise ValueError('Document id %r cannot be stored in an index file'
                         % doc_id)
    return doc_id


def save_index(index, filename):
    '''
    Write ``index`` to ``filename`` in the ``IDX1`` format.
    '''
    lines = [INDEX_HEADER]
    for doc_id in sorted(index.doc_len):
        text = base64.b64encode(index.doc_store[doc_id].encode('utf-8'))
        lines.append('%s\t%d\t%s' % (_check_doc_id(doc_id),
                                     index.doc_len[doc_id],
                                     text.decode('ascii')))
    for term in sorted(index.postings):
        entries = ','.join('%s:%d' % (_check_doc_id(doc_id), tf)
                           for doc_id, tf in index.postings[term])
        lines.append('%s\t%s' % (term, entries))
    with io.open(filename, 'w', encoding='utf-8', newline='\n') as f:
        f.write('\n'.join(lines) + '\n')
    logger.info('Wrote index with %d documents to "%s"' % (index.n_docs,
                                                          filename))


def load_index(filename):
    '''
    Read an index written by `save_index`.

    Returns
    -------
    index : `InvertedIndex`
    '''
    doc_len = {}
    doc_store = {}
    postings = {}
    with io.open(filename, 'r', encoding='utf-8', newline='\n') as f:
        header = f.readline().rstrip('\n')
        if header != INDEX_HEADER:
            raise ValueError('"%s" is not an index file (header %r)'
                             % (filename, header))
        for line_no, line in enumerate(f, start=2):
            line = line.rstrip('\n')
            if not line:
                continue
            fields = line.split('\t')
            try:
                if len(fields) == 3:
                    doc_id, length, text = fields
                    doc_len[doc_id] = int(length)
                    doc_store[doc_id] = base64.b64decode(
                        text.encode('ascii'), validate=True).decode('utf-8')
                elif len(fields) == 2:
                    term, entries = fields
                    plist = []
                    for entry in entries.split(','):
                        doc_id, _, tf = entry.rpartition(':')
                        plist.append((doc_id, int(tf)))
                    # ids come back as strings, which may order differently
                    postings[term] = sorted(plist)
                else:
                    raise ValueError('unexpected number of fields')
            except ValueError as ex:
                raise ValueError('%s:%d: malformed index line (%s)'
                                 % (filename, line_no, ex))
    return InvertedIndex(postings, doc_len, doc_store)
