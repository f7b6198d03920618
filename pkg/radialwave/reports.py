"""
Deterministic report files. Floats are written in shortest round-trip form
(``repr``), JSON with sorted keys and two-space indent, every file with
``\\n`` line ends, so repeating a run reproduces the bytes.
"""

import os
import json
import logging
from decorator import decorator
import fasteners

_logger = logging.getLogger(__name__)

def format_float(x):
    return repr(float(x))

@decorator
def _output_locked(f, self, *args, **kwargs):
    # pylint: disable=protected-access
    with self._output_lock:
        return f(self, *args, **kwargs)

class ReportWriter(object):
    """
    Writes the artifacts of one run into a directory, holding an
    inter-process lock on ``<directory>/.lock`` while doing so.
    """
    def __init__(self, directory):
        """
        :param directory: Output directory, created if missing
        :type directory: str
        """
        self._directory = directory
        if not os.path.isdir(directory):
            os.makedirs(directory, exist_ok=True)
        self._output_lock = fasteners.InterProcessLock(os.path.join(directory, '.lock'))

    @property
    def directory(self):
        return self._directory

    def _write(self, name, text):
        filename = os.path.join(self._directory, name)
        with open(filename, 'wb') as f:
            f.write(text.encode('utf-8'))
        _logger.info('wrote %s', filename)
        return filename

    @_output_locked
    def write_series(self, name, times, values):
        """
        Write ``<name>.csv`` with columns ``time,value``.
        """
        lines = ['time,value']
        lines.extend('%s,%s' % (format_float(t), format_float(v))
                     for t, v in zip(times, values))
        return self._write(name + '.csv', '\n'.join(lines) + '\n')

    @_output_locked
    def write_table(self, name, header, rows):
        """
        Write ``<name>.csv`` with the given header; floats use
        :func:`format_float`.
        """
        def cell(x):
            if isinstance(x, bool):
                return 'true' if x else 'false'
            if isinstance(x, float):
                return format_float(x)
            return str(x)
        lines = [','.join(header)]
        lines.extend(','.join(cell(x) for x in row) for row in rows)
        return self._write(name + '.csv', '\n'.join(lines) + '\n')

    @_output_locked
    def write_json(self, name, data):
        """
        Write ``<name>.json``.
        """
        return self._write(name + '.json', json.dumps(data, sort_keys=True, indent=2) + '\n')

    def write_report(self, report, formats, extra=None):
        """
        Write every series of a :class:`radialwave.functionals.DiagnosticReport`
        as CSV and its summary as ``summary.json``, as selected by
        ``formats``.

        :returns: names of the files written
        :rtype: list
        """
        written = []
        if 'csv' in formats:
            for name, (times, values) in report.series.items():
                written.append(self.write_series(name, times, values))
        if 'json' in formats:
            summary = report.to_dict()
            summary.update(extra or {})
            written.append(self.write_json('summary', summary))
        return written
