import os
from concurrent.futures import ProcessPoolExecutor, as_completed

import pandas as pd
import torch as T
import wandb
from tqdm import tqdm

from sparse_fading.errors import ParameterError
from sparse_fading.harness.experiments import ExperimentSpec
from sparse_fading.harness.output import (append_partial, load_rows,
                                          meta_path, partial_path, row_type,
                                          write_metadata, write_rows)
from sparse_fading.harness.trials import evaluate_point
from sparse_fading.solver.interior_point import DEFAULT_SETTINGS
from sparse_fading.solver.settings import SolverSettings
from sparse_fading.utils.logger import (init_logging, log_grid_point,
                                        log_progress, log_resumed)


def pin_threads():
    T.set_num_threads(1)


class ExperimentRunner:
    def __init__(self, spec: ExperimentSpec,
                 settings: SolverSettings = DEFAULT_SETTINGS,
                 num_workers=1, resume=False, use_wandb=False,
                 prefix='SWEEP', config=None, progress=True):
        """
        Runs the grid of an experiment and writes its CSV
        Args:
            spec: experiment to run
            settings: solver settings shared by every trial
            num_workers: worker processes, 1 runs in process
            resume: reuse points stored in the partial file of spec.out
            use_wandb: send per point metrics to wandb
            prefix: wandb run name prefix
            config: configuration dict logged with the wandb run
            progress: show a tqdm bar
        """
        if spec.is_validation:
            raise ParameterError(f'{spec.experiment} is a validation run, '
                                 f'use validate_statistics')
        if num_workers < 1:
            raise ParameterError(f'num_workers must be >= 1, got '
                                 f'{num_workers}')
        self.spec = spec
        self.settings = settings
        self.num_workers = num_workers
        self.resume = resume
        self.progress = progress
        self.use_wandb = use_wandb
        self.metrics = {}

        init_logging(config if config is not None else spec.to_dict(), self,
                     prefix)

    def run(self) -> pd.DataFrame:
        """
        Evaluates every grid point not already stored, then rewrites the
        CSV in canonical grid order and removes the partial file
        Returns: DataFrame of the written CSV
        """
        spec = self.spec
        row_class = row_type(spec)
        partial = partial_path(spec.out)
        if not self.resume and os.path.exists(partial):
            os.remove(partial)

        done = load_rows(partial, row_class) if self.resume else {}
        log_resumed(self, len(done))
        points = spec.points()
        todo = [point for point in points if point.key not in done]

        with tqdm(total=len(points), initial=len(points) - len(todo),
                  disable=not self.progress) as bar:
            for row in self.evaluate(todo):
                done[row.key] = row
                append_partial(row, partial)
                log_grid_point(self, row)
                log_progress(self, len(done), len(points))
                self.log_metrics()
                bar.update(1)

        rows = [done[point.key] for point in points]
        write_rows(rows, row_class, spec.out)
        write_metadata(spec, self.settings, meta_path(spec.out))
        if os.path.exists(partial):
            os.remove(partial)

        return pd.read_csv(spec.out)

    def evaluate(self, points):
        """Yields rows as points finish, in completion order"""
        if self.num_workers == 1:
            pin_threads()
            for point in points:
                yield evaluate_point(self.spec, point, self.settings)
            return

        with ProcessPoolExecutor(max_workers=self.num_workers,
                                 initializer=pin_threads) as pool:
            futures = [pool.submit(evaluate_point, self.spec, point,
                                   self.settings) for point in points]
            for future in as_completed(futures):
                yield future.result()

    def log_metrics(self):
        if self.use_wandb and self.metrics:
            wandb.log(self.metrics)
        self.metrics = {}


def run_experiment(spec: ExperimentSpec,
                   settings: SolverSettings = DEFAULT_SETTINGS,
                   **kwargs) -> pd.DataFrame:
    return ExperimentRunner(spec, settings, **kwargs).run()
