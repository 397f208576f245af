"""
Distance oracle benchmarking.

Measures the speed and memory use of the discretised distance oracle
at several grid resolutions on seeded random point pairs.
"""

import csv
import os
import time
from typing import List, Tuple

import psutil

from config.settings import CONFIG_FILE_PATH
from core.commands.model_context import ModelContext, build_context
from core.commands.protocols import ExperimentConfig
from core.config_loader import get_config_value
from core.errors import OracleBudgetError
from core.geometry.flip_complex import PointCoord
from core.logger import logger
from core.sampling import spawn_generators


class OracleBenchmarkRunner:
    """
    Benchmark the distance oracle on pairs of growing wall separation.

    Attributes:
        resolutions (List[float]): Grid spacings to compare.
        wall_counts (List[int]): Largest wall count of sampled pairs.
        pairs (int): Pairs per wall count.
        results (List[Tuple[int, float, float, float, int]]): Rows of
            wall count, resolution, time, memory and budget failures.
    """

    def __init__(self, spec: str, seed: int = 0, pairs: int = 5) -> None:
        self.resolutions = [1.0, 0.5, 0.25]
        self.wall_counts = [0, 1, 2, 4]
        self.pairs = pairs
        self.seed = seed
        self.context: ModelContext = build_context(
            ExperimentConfig(
                command="paths qgfit",
                spec=spec,
                seed=seed,
                samples=pairs,
                radius=1,
                resolution=self.resolutions[-1],
            )
        )
        self.results: List[Tuple[int, float, float, float, int]] = []

    def sample_pairs(
        self, max_walls: int
    ) -> List[Tuple[PointCoord, PointCoord]]:
        """Seeded pairs at most max_walls apart."""
        return [
            self.context.sampler.random_pair(rng, max_walls)
            for rng in spawn_generators(self.seed + max_walls, self.pairs)
        ]

    def benchmark_resolution(
        self, pairs: List[Tuple[PointCoord, PointCoord]], resolution: float
    ) -> Tuple[float, float, int]:
        """
        Time the oracle on every pair at one resolution.

        Returns:
            Tuple[float, float, int]: Average time in milliseconds,
            memory growth in megabytes and the number of pairs that
            exceeded the oracle budget.
        """
        process = psutil.Process(os.getpid())
        start_mem = process.memory_info().rss
        start_time = time.time()
        failures = 0
        for x, y in pairs:
            try:
                self.context.oracle.approx_distance(x, y, resolution)
            except OracleBudgetError:
                failures += 1
        elapsed = time.time() - start_time
        end_mem = process.memory_info().rss
        avg_time = elapsed / max(1, len(pairs)) * 1000
        return avg_time, (end_mem - start_mem) / (1024 * 1024), failures

    def write_to_csv(self, filename: str) -> None:
        """Save benchmark results to a CSV file."""
        with open(filename, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f)
            writer.writerow(
                [
                    "Max Walls",
                    "Resolution",
                    "Avg Time (ms)",
                    "Memory (MB)",
                    "Budget Failures",
                ]
            )
            writer.writerows(self.results)

    def run(self) -> str:
        """Run every configuration and return the CSV path."""
        for max_walls in self.wall_counts:
            pairs = self.sample_pairs(max_walls)
            for resolution in self.resolutions:
                logger.debug(
                    "Oracle at resolution %s, up to %d walls",
                    resolution,
                    max_walls,
                )
                avg_time, memory, failures = self.benchmark_resolution(
                    pairs, resolution
                )
                self.results.append(
                    (max_walls, resolution, avg_time, memory, failures)
                )

        results_dir = str(
            get_config_value(
                CONFIG_FILE_PATH, "results_dir", default="results"
            )
        )
        os.makedirs(results_dir, exist_ok=True)
        csv_path = os.path.join(results_dir, "oracle_benchmark_results.csv")
        self.write_to_csv(csv_path)
        logger.info("Benchmark results written to %s", csv_path)
        return csv_path


if __name__ == "__main__":
    default_spec = str(
        get_config_value(
            CONFIG_FILE_PATH,
            "default_spec",
            default="data/two_piece_wedge.json",
        )
    )
    OracleBenchmarkRunner(default_spec).run()
