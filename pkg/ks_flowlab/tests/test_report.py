import json
import os
import shutil
import tempfile
import unittest
from datetime import timedelta

from dateutil.parser import isoparse

from ks_flowlab.report import REPORT_NAME, RunReport, utc_now
from ks_flowlab.scenario_config import ScenarioConfig


def fake_check(name, passed, measured=0.5, bound=1.0, msgs=()):
    return {"name": name, "weight": 3, "value": [int(passed), 1],
            "msgs": list(msgs), "measured": measured, "bound": bound,
            "passed": passed}


class RunReportTestCase(unittest.TestCase):

    def setUp(self):
        self.tmpdir = tempfile.mkdtemp()
        self.config = ScenarioConfig({'scenario': 'parallelogram'})
        self.report = RunReport(
            'parallelogram', self.config,
            [fake_check('Residual bounded', True),
             fake_check('Identity holds', False, 0.25, 0.01,
                        ['residual too large'])],
            utc_now(), 1.5)

    def tearDown(self):
        shutil.rmtree(self.tmpdir)

    def test_passed(self):
        self.assertFalse(self.report.passed)
        self.assertEqual(self.report.failed_checks, ['Identity holds'])
        self.assertEqual(self.report.check('Residual bounded')['bound'], 1.0)
        with self.assertRaises(KeyError):
            self.report.check('missing')

    def test_to_json(self):
        document = self.report.to_json()
        self.assertEqual(document['schema'], 1)
        self.assertEqual(document['config']['scenario'], 'parallelogram')
        started = isoparse(document['wall_clock']['started'])
        self.assertEqual(started.utcoffset(), timedelta(0))
        self.assertNotIn('wall_clock',
                         self.report.to_json(include_wall_clock=False))

    def test_write(self):
        directory = os.path.join(self.tmpdir, 'nested')
        path = self.report.write(directory)
        self.assertEqual(path, os.path.join(directory, REPORT_NAME))
        with open(path) as handle:
            document = json.load(handle)
        self.assertFalse(document['passed'])
        self.assertEqual(len(document['checks']), 2)

    def test_summary(self):
        summary = self.report.summary()
        self.assertTrue(summary.startswith('parallelogram: FAIL'))
        self.assertIn('[!!] Identity holds measured=0.25 bound=0.01',
                      summary)
        self.assertIn('residual too large', summary)
