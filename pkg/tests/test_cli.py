"""
Tests for the command-line front end.
"""
import io
import os
import sys
import json
import shutil
import tempfile
import argparse
import unittest
import logging
from contextlib import redirect_stderr, redirect_stdout

import numpy as np
import pandas as pd

# Add the project root to the path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from super_jc.__main__ import main, parse_lambdas, parse_range


class TestArgumentParsing(unittest.TestCase):
    """Test value parsers."""

    def test_range(self):
        values = parse_range('1:10:200')
        self.assertEqual(values.size, 200)
        self.assertEqual((values[0], values[-1]), (1.0, 10.0))
        np.testing.assert_array_equal(parse_range('10'), [10.0])

    def test_bad_range(self):
        for text in ('1:2', 'a:b:3', '1:2:0', '1:2:1'):
            with self.assertRaises(argparse.ArgumentTypeError):
                parse_range(text)

    def test_lambdas(self):
        self.assertEqual(parse_lambdas('1,2.5'), (1.0, 2.5))
        with self.assertRaises(argparse.ArgumentTypeError):
            parse_lambdas('1,0')


class TestCommands(unittest.TestCase):
    """Run subcommands end to end."""

    def setUp(self):
        logging.disable(logging.CRITICAL)
        self.temp_dir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.temp_dir)
        logging.disable(logging.NOTSET)

    def _run(self, *argv):
        out, err = io.StringIO(), io.StringIO()
        with redirect_stdout(out), redirect_stderr(err):
            status = main(list(argv))
        return status, out.getvalue(), err.getvalue()

    def test_super_cw(self):
        status, out, _ = self._run('super-cw', '--omega0', '1', '--d1', '2')
        self.assertEqual(status, 0)
        self.assertEqual(out.strip(), '4.3589')

    def test_super_cw_simulation(self):
        path = os.path.join(self.temp_dir, 'super.csv')
        status, out, _ = self._run('super-cw', '--omega0', '1', '--d1', '2', '--simulate', '-o', path)
        self.assertEqual(status, 0)
        peak = float(out.split('max P_x=')[1].split()[0])
        self.assertGreater(peak, 0.99)
        self.assertTrue(os.path.exists(path))

    def test_super_pulsed(self):
        status, out, _ = self._run('super-pulsed', '--d1', '3', '--omega1-max', '4')
        self.assertEqual(status, 0)
        self.assertEqual(out.strip(), '8.0000')

    def test_vacuum_dynamics(self):
        path = os.path.join(self.temp_dir, 'vacuum.csv')
        status, _, _ = self._run('dynamics', '--initial', 'g,0,0', '--d1', '1', '--d2', '2',
                                 '--t-end', '10', '--samples', '11', '-o', path)
        self.assertEqual(status, 0)
        df = pd.read_csv(path, comment='#')
        self.assertEqual(len(df), 11)
        self.assertTrue((df['p_excited'] == 0.0).all())

    def test_scan_json_and_plot(self):
        path = os.path.join(self.temp_dir, 'scan.json')
        plot = os.path.join(self.temp_dir, 'scan.svg')
        status, out, _ = self._run('scan', '--initial', 'g,1,0', '--d1=-2:2:3', '--d2', '0:4:3',
                                   '--horizon', '20', '--workers', '2', '--format', 'json',
                                   '-o', path, '--plot', plot)
        self.assertEqual(status, 0)
        self.assertIn('max P_x=', out)
        with open(path, encoding='utf-8') as f:
            payload = json.load(f)
        self.assertEqual(payload['delta1_values'], [-2.0, 0.0, 2.0])
        self.assertEqual(len(payload['max_occupation']), 3)
        self.assertEqual(payload['config']['horizon'], 20.0)
        self.assertTrue(os.path.exists(plot))

    def test_scan_is_reproducible(self):
        outputs = []
        for name, workers in (('a.csv', '1'), ('b.csv', '3')):
            path = os.path.join(self.temp_dir, name)
            status, _, _ = self._run('scan', '--initial', 'g,1,0', '--d1', '1:3:3', '--d2', '5',
                                     '--horizon', '50', '--workers', workers, '-o', path)
            self.assertEqual(status, 0)
            with open(path, 'rb') as f:
                outputs.append(f.read())
        self.assertEqual(outputs[0], outputs[1])

    def test_cut_reports_peaks(self):
        path = os.path.join(self.temp_dir, 'cut.csv')
        status, out, _ = self._run('cut', '--initial', 'g,2,0', '--d1', '4.3:4.9:61', '--d2', '10',
                                   '--horizon', '2000', '-o', path)
        self.assertEqual(status, 0)
        self.assertIn('peaks at delta1/Lambda', out)
        location = float(out.split('peaks at delta1/Lambda: ')[1].split()[0])
        self.assertAlmostEqual(location, 4.62, delta=0.05)

    def test_rabi(self):
        status, out, _ = self._run('rabi', '--omega', '1', '--delta', '1')
        self.assertEqual(status, 0)
        deviation = float(out.split('max deviation from analytic=')[1])
        self.assertLess(deviation, 1e-6)

    def test_predict_and_reduce(self):
        status, out, _ = self._run('predict', '--initial', 'g,2,0', '--d2', '10', '--order', '2')
        self.assertEqual(status, 0)
        self.assertIn('delta1=4.5616', out)
        self.assertIn('|x,0,1>', out)

        path = os.path.join(self.temp_dir, 'reduce.json')
        status, out, _ = self._run('reduce', '--initial', 'g,2,0', '--d1', '4.62', '--d2', '10',
                                   '--format', 'json', '-o', path)
        self.assertEqual(status, 0)
        with open(path, encoding='utf-8') as f:
            payload = json.load(f)
        self.assertEqual(len(payload['reduced_hamiltonian']), 5)
        self.assertAlmostEqual(payload['omega_eff'], -0.1138, places=4)

    def test_parse_error_exit_status(self):
        with redirect_stderr(io.StringIO()):
            with self.assertRaises(SystemExit) as ctx:
                main(['scan', '--d1', 'abc', '--d2', '10'])
        self.assertEqual(ctx.exception.code, 2)

    def test_non_positive_counts_exit_status(self):
        for argv in (['dynamics', '--d1', '1', '--d2', '2', '--samples', '0'],
                     ['scan', '--d1', '1:2:3', '--d2', '2', '--workers=-1'],
                     ['cut', '--d1', '1:2:5', '--d2', '2', '--workers=0']):
            with redirect_stderr(io.StringIO()):
                with self.assertRaises(SystemExit) as ctx:
                    main(argv)
            self.assertEqual(ctx.exception.code, 2)

    def test_log_file_error_exit_status(self):
        blocker = os.path.join(self.temp_dir, 'file.txt')
        with open(blocker, 'w') as f:
            f.write('x')
        status, _, err = self._run('super-cw', '--omega0', '1', '--d1', '2',
                                   '--log-file', os.path.join(blocker, 'run.log'))
        self.assertEqual(status, 4)
        self.assertIn('error [io]', err)

    def test_invalid_parameter_exit_status(self):
        status, _, err = self._run('dynamics', '--d1', '1:2:3', '--d2', '1')
        self.assertEqual(status, 2)
        self.assertIn('error [parse]', err)

    def test_predict_rejects_unusable_initial_states(self):
        status, out, err = self._run('predict', '--initial', 'g,1,0', '--d1', '3')
        self.assertEqual(status, 3)
        self.assertEqual(out, '')
        self.assertIn('error [numerical]', err)

        status, _, err = self._run('predict', '--initial', 'x,2,0', '--d1', '3')
        self.assertEqual(status, 2)
        self.assertIn('error [parse]', err)

    def test_numerical_error_exit_status(self):
        status, _, err = self._run('reduce', '--initial', 'g,2,0', '--d1', '5', '--d2', '5')
        self.assertEqual(status, 3)
        self.assertIn('error [numerical]', err)

    def test_io_error_exit_status(self):
        blocker = os.path.join(self.temp_dir, 'file.txt')
        with open(blocker, 'w') as f:
            f.write('x')
        status, _, err = self._run('rabi', '-o', os.path.join(blocker, 'out.csv'))
        self.assertEqual(status, 4)
        self.assertIn('error [io]', err)


if __name__ == '__main__':
    unittest.main()
