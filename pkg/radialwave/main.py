# pylint: disable=wrong-import-position,wrong-import-order,superfluous-parens
import os
import sys
import math
import argparse
import itertools
import tqdm

choices = ['simulate', 'verify', 'sweep']

parser = argparse.ArgumentParser(prog='radialwave')
subparsers = parser.add_subparsers(dest='op')
for c in choices:
    sp = subparsers.add_parser(c)
    if c == 'verify':
        sp.add_argument('--suite', required=True)
    else:
        sp.add_argument('--config', required=True)
        sp.add_argument('--seed', type=int)
    if c == 'sweep':
        sp.add_argument('--axis', action='append', default=[])
    sp.add_argument('--out')

SWEEP_HEADER = ['run', 'p', 'epsilon', 'family', 'energy0', 'energy_defect',
                'morawetz', 'scattering_size', 'scattering_defect', 'decay_max', 'passed']

def _tail_cutoff(config):
    # largest cutoff whose support 2*cutoff still fits the window rule
    room = config.grid.r_max - config.T - 2.0 - abs(config.t_first)
    return math.floor(room * 1e6 / 2.0) / 1e6

_FAMILY_AXIS = {
    'zero': lambda config, epsilon: {'position': {'family': 'zero'}},
    'gaussian': lambda config, epsilon: {
        'position': {'family': 'gaussian', 'amplitude': 1.0, 'width': 1.0, 'center': 0.0}},
    'tail': lambda config, epsilon: {
        'position': {'family': 'tail', 'epsilon': epsilon, 'eta': 0.5, 'amplitude': 1.0,
                     'cutoff': _tail_cutoff(config)}},
}

def failed(code):
    import traceback
    traceback.print_exc()
    return code

def run_simulate(config, out=None, progress=None):
    """
    Evolve the configured data, run the requested analyses and write the
    report files.

    :param config: Run configuration
    :type config: radialwave.config.RunConfig

    :param out: Output directory; overrides ``output.directory``
    :type out: str

    :rtype: radialwave.functionals.DiagnosticReport
    """
    from radialwave.core import synthesize_data
    from radialwave.solver import picard_solve, evolve_window
    from radialwave.transform import push_forward
    from radialwave.functionals import build_report
    from radialwave.reports import ReportWriter

    state0 = synthesize_data(config.data, config.grid)
    if config.backend == 'picard':
        traj = picard_solve(state0, config.profile, config.T, config.iters,
                            config.stride, progress)
    else:
        traj = evolve_window(state0, config.profile, config.t_first, config.T,
                             config.stride, progress)
    vtraj = push_forward(traj, config.chart, config.interpolation) \
        if config.chart is not None else None
    report = build_report(traj, config.profile, config.params, config.data,
                          config.analyses, data=state0, vtraj=vtraj, chart=config.chart)
    if vtraj is not None:
        report.info['chart'] = config.chart.to_dict()
    writer = ReportWriter(out or config.directory)
    writer.write_report(report, config.formats, {'config': config.to_dict()})
    return report

def run_verify(suite, out=None, progress=None):
    """
    Run a verification suite and write ``verify.json``.

    :rtype: dict
    """
    from radialwave.suites import run_suite
    from radialwave.reports import ReportWriter
    checks = run_suite(suite, progress)
    verdict = {'suite': suite,
               'passed': all(c.passed for c in checks),
               'checks': [c.to_dict() for c in checks]}
    if out:
        ReportWriter(out).write_json('verify', verdict)
    return verdict

def _sweep_configs(base, axes):
    names = [name for name, _ in axes]
    points = []
    for values in itertools.product(*[v for _, v in axes]):
        point = dict(zip(names, values))
        overrides = {}
        if 'p' in point:
            overrides['parameters.p'] = point['p']
        if 'epsilon' in point:
            overrides['parameters.epsilon'] = point['epsilon']
        if 'family' in point:
            epsilon = point.get('epsilon', base.params.epsilon)
            overrides['data'] = _FAMILY_AXIS[point['family']](base, epsilon)
        points.append((point, base.derive(**overrides)))
    return points

def _summary_row(index, point, config, report):
    budgets = report.budgets
    if 'conservation' in budgets:
        defect = budgets['conservation'].value
    elif 'dissipation' in budgets:
        defect = budgets['dissipation'].details['defect']
    else:
        defect = ''
    return [index,
            config.params.p,
            config.params.epsilon,
            point.get('family', config.data.position.name),
            report.info.get('energy0', ''),
            defect,
            budgets['morawetz'].value if 'morawetz' in budgets else '',
            report.norms.get('I', ''),
            report.defects[-1].defect if report.defects else '',
            report.decay.es1_max if report.decay is not None else '',
            report.passed]

def run_sweep(base, axes, out=None, threads=None, cap=64, progress=None):
    """
    Run the cartesian product of ``axes`` over a base configuration,
    one sub-directory per run, and write the aggregate ``sweep.csv``.

    :param axes: ``(name, values)`` pairs for ``p``, ``epsilon`` and ``family``
    :type axes: list

    :returns: one summary row per run
    :rtype: list
    """
    from concurrent.futures import ThreadPoolExecutor
    from radialwave.exceptions import SweepCapError
    from radialwave.reports import ReportWriter

    size = 1
    for _, values in axes:
        size *= len(values)
    if size > cap:
        raise SweepCapError(size, cap)
    points = _sweep_configs(base, axes)
    directory = out or base.directory
    required = ['energy', 'morawetz', 'mixed_norm', 'scattering']

    def one(index, point, config):
        analyses = config.analyses + [a for a in required if a not in config.analyses]
        if config.params.kappa > 0 and 'dissipation' not in analyses:
            analyses.append('dissipation')
        config.analyses = analyses
        report = run_simulate(config, os.path.join(directory, 'run-%03d' % index))
        return _summary_row(index, point, config, report)

    rows = [None] * len(points)
    workers = max(1, min(threads or os.cpu_count() or 1, len(points)))
    with ThreadPoolExecutor(max_workers=workers) as executor:
        futures = dict((executor.submit(one, i, point, config), i)
                       for i, (point, config) in enumerate(points))
        done = 0
        for future in futures:
            rows[futures[future]] = future.result()
            done += 1
            if progress:
                progress('sweep', done, len(points))
    ReportWriter(directory).write_table('sweep', SWEEP_HEADER, rows)
    return rows

# pylint: disable=too-many-statements,too-many-locals
def doit(args, environ):
    import radialwave.log
    log_file = environ.get('RADIALWAVE_LOG_FILE', '')
    if log_file:
        log_level = environ.get('RADIALWAVE_FILE_LOG_LEVEL', 'WARNING')
        radialwave.log.enable_file_logging(log_file, radialwave.log.level_named(log_level))
    log_level = environ.get('RADIALWAVE_CONSOLE_LOG_LEVEL', 'WARNING')
    radialwave.log.set_console_log_level(radialwave.log.level_named(log_level))

    from radialwave import exceptions
    from radialwave.config import load_config, parse_axis

    radialwave_progress = environ.get('RADIALWAVE_PROGRESS')
    if radialwave_progress == '1' or (radialwave_progress != '0' and sys.stderr.isatty()):
        bars = {}
        def progress(label, done, total):
            if label not in bars:
                bars[label] = tqdm.tqdm(desc=label,
                                        total=total,
                                        leave=True)
            if done > bars[label].n:
                bars[label].update(done - bars[label].n)
            if bars[label].n >= bars[label].total:
                bars[label].close()
                del bars[label]
    else:
        progress = None

    args = parser.parse_args(args)
    if args.op is None:
        parser.error('an operation is required')

    def _doit():
        # pylint: disable=too-many-branches
        if args.op == 'simulate':
            config = load_config(args.config)
            if args.seed is not None:
                config = config.derive(seed=args.seed)
            report = run_simulate(config, args.out, progress)
            for entry in report.budgets.values():
                print(str(entry))
            if report.decay is not None:
                print('decay: es1 %.6g characteristic %.6g %s' % (
                    report.decay.es1_max, report.decay.characteristic_max,
                    'pass' if report.decay.passed else 'FAIL'))
            return 0 if report.passed else 1

        elif args.op == 'verify':
            verdict = run_verify(args.suite, args.out, progress)
            for check in verdict['checks']:
                print(('pass ' if check['passed'] else 'FAIL ') + check['name'])
            return 0 if verdict['passed'] else 1

        elif args.op == 'sweep':
            config = load_config(args.config)
            if args.seed is not None:
                config = config.derive(seed=args.seed)
            axes = [parse_axis(a) for a in args.axis]
            threads = environ.get('RADIALWAVE_THREADS')
            cap = int(environ.get('RADIALWAVE_SWEEP_CAP', '64'))
            rows = run_sweep(config, axes, args.out,
                             int(threads) if threads else None, cap, progress)
            for row in rows:
                print(','.join(str(x) for x in row))
            return 0 if all(row[-1] for row in rows) else 1

    try:
        return _doit()
    except (exceptions.ConfigError,
            exceptions.UnknownSuiteError,
            exceptions.SweepCapError,
            exceptions.InvalidArgumentError):
        return failed(2)
    except (exceptions.NumericalBlowupError,
            exceptions.NoContractionError,
            exceptions.CoverageError):
        return failed(3)

def main():
    exit(doit(sys.argv[1:], os.environ))
