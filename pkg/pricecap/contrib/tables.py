#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
    pricecap.contrib.tables
    ~~~~~~~~~~~~~~~~~~~~~~~

    Import and export tabular data from popular formats.

    :copyright: (c) 2012 by Roman Haritonov.
    :license: BSD, see LICENSE.txt for more details.
"""
import csv
import io
import json
import numbers
import os

import tablib

try:
    import xlrd
except ImportError:  # optional, ``pip install pricecap[xls]``
    xlrd = None

from pricecap.utils import format_float

__all__ = ['Table', 'FormatNotSupported', 'available_write_formats',
           'available_read_formats']


class FormatNotSupported(Exception):
    pass


def _native(value):
    """ numpy scalars to plain python values, so every exporter accepts them """
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, numbers.Integral):
        return int(value)
    if isinstance(value, numbers.Real):
        return float(value)
    return value


def _cell(value):
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        return format_float(value)
    return str(value)


class Table(object):
    """ Represents table with ability to import and export data to following formats:

    - csv
    - json
    - xls (read only, needs `xlrd`)

    When you need to store some data, it can be done as follows::

        table = Table(['param', 'error'])
        for n in (100, 200):
            table.writerow([n, 1.0 / n])
        table.comment('fitted_rate=1.0')

        table.save('study.csv', 'csv')

    Floats are written with the shortest representation that reads back
    to the same number, so equal tables give equal files.

    To import data from file, use :meth:`data_from_file`::

        data = Table.data_from_file('alpha.csv')

    """

    _write_formats = set(['csv', 'json'])
    _read_formats = set(['csv', 'json', 'xls'])

    def __init__(self, headers=None):
        self.headers = list(headers) if headers else None
        self.comments = []
        self.dataset = tablib.Dataset(headers=self.headers)

    def writerow(self, row):
        """ Add `row` to table

        :param row: row to add
        :type row: list or tuple
        """
        self.dataset.append([_native(c) for c in row])

    def append(self, row):
        """ Synonym for :meth:`writerow`
        """
        self.writerow(row)

    def comment(self, text):
        """ Adds trailing ``# text`` line to `csv` output """
        self.comments.append(text)

    def clear(self):
        """ Clear current table
        """
        self.dataset = tablib.Dataset(headers=self.headers)
        self.comments = []

    def __len__(self):
        return self.dataset.height

    def _iter_rows(self):
        for i in range(self.dataset.height):
            yield self.dataset[i]

    @property
    def rows(self):
        return [list(row) for row in self._iter_rows()]

    def column(self, name):
        return list(self.dataset[name])

    def save(self, filename, fmt=None):
        """ Save data to file

        :param filename: path to file
        :param fmt: data format (one of supported, e.g. 'csv', 'json'),
                    guessed from `filename` extension if `None`
        """
        if fmt is None:
            fmt = os.path.splitext(filename)[1][1:]
        self._raise_if_bad_format(fmt)
        with open(filename, 'w', encoding='utf-8', newline='') as output:
            output.write(self.convert(fmt))

    def convert(self, fmt):
        """ Return data, converted to format

        :param fmt: desirable format of data

        See also :meth:`available_write_formats`
        """
        self._raise_if_bad_format(fmt)
        if fmt == 'csv':
            stream = io.StringIO()
            self.to_csv(stream)
            return stream.getvalue()
        return self.dataset.export('json')

    def _raise_if_bad_format(self, fmt):
        if fmt not in self._write_formats:
            raise FormatNotSupported('Unknown format: %s' % fmt)

    def to_csv(self, stream, delimiter=',', **kwargs):
        """ Writes data in `csv` format to stream, comments go last

        :param stream: text stream to write data to
        :param delimiter: `csv` delimiter
        :param kwargs: additional parameters for :class:`csv.writer`
        """
        kwargs.setdefault('lineterminator', '\n')
        writer = csv.writer(stream, delimiter=delimiter, **kwargs)
        if self.headers:
            writer.writerow(self.headers)
        for row in self._iter_rows():
            writer.writerow([_cell(c) for c in row])
        for text in self.comments:
            stream.write('# %s%s' % (text, kwargs['lineterminator']))

    @staticmethod
    def data_from_file(filename, fmt=None, csv_delimiter=','):
        """ Returns rows of data from file

        :param filename: path to file with data
        :param fmt: format of file, if it's `None`, then it tries to guess format
                    from `filename` extension
        :param csv_delimiter: delimiter for `csv` data

        Format should be in :meth:`available_read_formats`. Lines starting
        with ``#`` are skipped in `csv`.
        """
        if fmt is None:
            fmt = os.path.splitext(filename)[1][1:]
        return _TableImporter(csv_delimiter=csv_delimiter).import_table(filename, fmt)

    @staticmethod
    def available_write_formats():
        return sorted(Table._write_formats)

    @staticmethod
    def available_read_formats():
        return sorted(Table._read_formats)


class _TableImporter(object):
    def __init__(self, csv_delimiter=','):
        self.csv_delimiter = csv_delimiter

    def import_table(self, filename, fmt):
        reader = getattr(self, 'read_%s' % fmt, None)
        if reader is None:
            raise FormatNotSupported('Unknown fmt: %s' % fmt)
        if fmt == 'xls':
            stream = open(filename, 'rb')
        else:
            stream = open(filename, 'r', encoding='utf-8', newline='')
        with stream:
            return list(reader(stream))

    def read_csv(self, stream):
        lines = (line for line in stream if not line.lstrip().startswith('#'))
        for row in csv.reader(lines, delimiter=self.csv_delimiter):
            if row:
                yield row

    def read_xls(self, stream):
        if xlrd is None:
            raise FormatNotSupported('xls needs xlrd installed')
        book = xlrd.open_workbook(file_contents=stream.read())
        sheet = book.sheet_by_index(0)
        for row in range(sheet.nrows):
            yield [sheet.cell(row, col).value for col in range(sheet.ncols)]

    def read_json(self, stream):
        data = json.load(stream)
        if data and isinstance(data[0], dict):
            headers = list(data[0])
            yield headers
            for item in data:
                yield [item[h] for h in headers]
        else:
            for row in data:
                yield row


available_write_formats = Table.available_write_formats
available_read_formats = Table.available_read_formats
