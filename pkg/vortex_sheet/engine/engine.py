import importlib.util
import inspect
import os
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from vortex_sheet.config import config
from vortex_sheet.engine.basic_check import CHECK_FAILURE_TEXT, CHECK_SKIPPED_TEXT, CHECK_SUCCESS_TEXT, CheckResult
from vortex_sheet.engine.job import Job
from vortex_sheet.logger import logger

REPO_ROOT = Path(__file__).resolve().parents[2]


def run_jobs(jobs, fn, workers=None):
    """Evaluate fn on every job; results come back ordered by job["index"]."""
    workers = config.num_workers if workers is None else workers
    jobs = sorted(jobs, key=lambda job: job["index"])
    if workers <= 1 or len(jobs) <= 1:
        return [fn(job) for job in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, jobs))


class Engine(object):
    def __init__(self, context, checks_location=None):
        self.checks = []
        self.context = context

        self.config = config
        self.checks_location = checks_location if checks_location is not None else self.config.checks_location
        self.load_checks()

    def add_check(self, check_obj):
        self.checks.append(check_obj)
        self.checks = sorted(self.checks, key=lambda check: check.__name__)

    def load_checks(self):
        logger.debug("Loading checks source from " + str(self.checks_location))
        loaded_checks = Engine.load_check_files(self.checks_location)
        for loaded_check in loaded_checks:
            logger.debug(" Found " + loaded_check.__name__)
            self.add_check(loaded_check)

    @staticmethod
    def load_check_files(checks_location):
        found_checks = []
        checks_path = Path(checks_location)
        if not checks_path.is_absolute():
            checks_path = REPO_ROOT / checks_path

        if not checks_path.is_dir():
            raise ValueError(f"{checks_location} is not a valid directory.")

        for py_file in sorted(checks_path.glob("*.py")):
            module_path = str(py_file.resolve())
            relative_module_path = os.path.relpath(module_path, str(checks_path.parent))
            module_str = relative_module_path.replace("/", ".").replace(".py", "")

            spec = importlib.util.spec_from_file_location(module_str, module_path)
            module = importlib.util.module_from_spec(spec)
            spec.loader.exec_module(module)

            for name, arg in inspect.getmembers(module, inspect.isclass):
                if name == "BasicCheck":
                    continue
                if not name.endswith("Check"):
                    continue
                # helpers imported from elsewhere are picked up by their own module
                if arg.__module__ != module_str:
                    continue
                found_checks.append(arg)

        return found_checks

    def check_name_to_obj(self, check_name):
        for check in self.checks:
            if check.__name__ == check_name:
                return check
        return None

    def run_check(self, check_class):
        name = check_class.__name__
        # a missing context property is a setup error, not a failed property
        check_obj = check_class(self.context)
        try:
            return check_obj.run()
        except Exception as e:
            logger.debug("{0} raised {1!r}".format(name, e))
            detail = "{0}: {1}".format(type(e).__name__, e)
            return CheckResult(name, getattr(check_class, "MODULE", ""), CHECK_FAILURE_TEXT, detail)

    def run_checks(self, names=None):
        if names is None:
            selected = self.checks
        else:
            selected = []
            for check_name in names:
                check_class = self.check_name_to_obj(check_name)
                if check_class is None:
                    raise LookupError("Unable to find check code for " + str(check_name))
                selected.append(check_class)

        logger.info("Running {0} check(s)".format(len(selected)))
        jobs = [Job(index=index, check=check_class) for index, check_class in enumerate(selected)]
        results = run_jobs(jobs, lambda job: self.run_check(job["check"]))

        passed = len([r for r in results if r.status == CHECK_SUCCESS_TEXT])
        skipped = len([r for r in results if r.status == CHECK_SKIPPED_TEXT])
        failed = [r.name for r in results if r.status == CHECK_FAILURE_TEXT]
        stat_string = "Success: " + str(passed) + ", Skipped: " + str(skipped) + ", Failed: " + str(len(failed))
        if failed:
            stat_string += " (" + ", ".join(failed) + ")"
        logger.info(stat_string)
        return results
