"""Parallel execution of independent experiments."""

import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence

from app.core.v1.exceptions import LabException
from app.core.v1.experiment_schema import ExperimentResult, ExperimentSpec
from app.core.v1.experiments import run_experiment
from app.core.v1.log_manager import LogManager
from app.settings.v1.general import SETTINGS


@dataclass
class RunOutcome:
    """Result or error of one experiment, in submission order."""

    spec: ExperimentSpec
    result: Optional[ExperimentResult] = None
    error: Optional[LabException] = None
    seconds: float = 0.0


class ExperimentRunner:
    """Runs experiments on a thread pool; each run is internally sequential."""

    def __init__(self, jobs: int = 1):
        self.logger = LogManager(__name__)
        self.jobs = max(1, min(jobs, SETTINGS.MAX_JOBS))

    def _run_single(self, spec: ExperimentSpec) -> RunOutcome:
        started = time.perf_counter()
        try:
            result = run_experiment(spec)
            return RunOutcome(spec=spec, result=result, seconds=time.perf_counter() - started)
        except LabException as err:
            self.logger.error("Experiment aborted", experiment=spec.name, error=err.message)
            return RunOutcome(spec=spec, error=err, seconds=time.perf_counter() - started)

    def run(
        self,
        specs: Sequence[ExperimentSpec],
        on_complete: Optional[Callable[[RunOutcome], None]] = None,
    ) -> List[RunOutcome]:
        """Run every spec and return outcomes in the order given.

        Args:
            specs (Sequence[ExperimentSpec]): Experiments with resolved grids.
            on_complete (Optional[Callable]): Called once per finished experiment.

        Returns:
            List[RunOutcome]: One outcome per spec.
        """
        if not specs:
            return []

        outcomes: List[Optional[RunOutcome]] = [None] * len(specs)
        self.logger.info("Running experiments", count=len(specs), jobs=self.jobs)

        with ThreadPoolExecutor(max_workers=self.jobs) as executor:
            future_to_index = {
                executor.submit(self._run_single, spec): index
                for index, spec in enumerate(specs)
            }

            for future in as_completed(future_to_index):
                outcome = future.result()
                outcomes[future_to_index[future]] = outcome
                if on_complete:
                    on_complete(outcome)

        return outcomes
