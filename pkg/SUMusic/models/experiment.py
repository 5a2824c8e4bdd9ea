"""
Validated experiment configuration.
"""
from copy import deepcopy
from itertools import product
import logging
from typing import (Dict, List, Mapping, Optional, Union)

from SUMusic.errors import ValidationError
from SUMusic.models import (Algorithm, FeatureSet, FramingSpec, Weighting)

logger = logging.getLogger("SUMusic")

# Keys of an algorithm block that are passed on to the summarizer
SUMMARIZER_KEYS = (
    "framing",
    "n_mfcc",
    "spectral",
    "vocabulary_size",
    "sentence_size",
    "weighting",
    "lambda",
    "prior",
    "damping",
    "threshold",
    "weighted",
    "metric",
)

# Summarizer parameters a sweep can vary, with the grid key of their values
SWEEP_AXES = {
    "framing": "framings",
    "n_mfcc": "n_mfcc",
    "vocabulary_size": "vocabulary_sizes",
    "sentence_size": "sentence_sizes",
    "weighting": "weightings",
    "lambda": "mmr_lambdas",
}


class ExperimentConfig:
    """
    Experiment settings read from the merged YAML config. Every value that
    has a declared range in the `grid` section must lie in it; seeds are
    mandatory.
    """
    def __init__(
        self,
        config: Mapping,
        seed: Optional[int] = None,
        workers: Optional[int] = None,
    ) -> None:
        """
        :param config: Merged config, see `SUMusic.config.load_config()`.
        :param seed: If given, replaces the summarization, evaluation and
                corpus seeds.
        :param workers: If given, replaces the configured worker count.

        :raises SUMusic.errors.ValidationError
        """
        self.config = deepcopy(dict(config))
        if seed is not None:
            for section in ("summarization", "evaluation", "corpus"):
                self.config.setdefault(section, {})["seed"] = seed
        if workers is not None:
            self.config["workers"] = workers
        self.validate()

    def to_dict(self) -> Dict:
        """Return the (sanitized) config as dictionary."""
        return deepcopy(self.config)

    @property
    def workers(self) -> int:
        return int(self.config["workers"])

    @property
    def working_rate(self) -> int:
        return int(self.config["audio"]["working_rate"])

    @property
    def features(self) -> Dict:
        return self.config["features"]

    @property
    def evaluation(self) -> Dict:
        return self.config["evaluation"]

    @property
    def corpus(self) -> Dict:
        return self.config["corpus"]

    @property
    def sweep(self) -> Dict:
        return self.config["sweep"]

    @property
    def duration(self) -> float:
        return float(self.config["summarization"]["duration"])

    def validate(self) -> None:
        """
        Validates and sanitizes all sections.

        :raises SUMusic.errors.ValidationError
        """
        for section in (
            "audio", "features", "summarization", "evaluation", "corpus",
            "sweep", "grid",
        ):
            if not isinstance(self.config.get(section), dict):
                raise ValidationError(f"Config section '{section}' missing.")
        self.grid = self.config["grid"]

        # Seeds
        for section in ("summarization", "evaluation", "corpus"):
            seed = self.config[section].get("seed")
            if not isinstance(seed, int) or isinstance(seed, bool):
                raise ValidationError(
                    f"Seed '{section}.seed' is mandatory and must be an "
                    f"integer, got '{seed}'."
                )

        # Workers
        if not isinstance(self.config.get("workers"), int) or \
                self.config["workers"] < 1:
            raise ValidationError("'workers' must be a positive integer.")

        # Summarization parameters
        self._check_in_grid(
            "summarization.duration",
            self.config["summarization"]["duration"],
            "durations",
        )
        blocks = self.config["summarization"].get("algorithms", {})
        for name in blocks:
            algorithm = Algorithm.parse(name)
            if algorithm.is_ranker:
                self.algorithm_parameters(algorithm)
        for duration in self.algorithm_block(Algorithm.avgsim).get(
            "durations", []
        ):
            if duration <= 0:
                raise ValidationError(
                    f"Average Similarity durations must be positive, got "
                    f"{duration}."
                )

        # Sweep
        self.sweep["algorithms"] = [
            self.sanitize_ranker(a) for a in self.sweep.get("algorithms", [])
        ]
        self.sweep["baselines"] = [
            Algorithm.parse(a).value for a in self.sweep.get("baselines", [])
        ]
        for baseline in self.sweep["baselines"]:
            if baseline not in ("begin", "middle", "end"):
                raise ValidationError(
                    f"'{baseline}' is not a contiguous baseline."
                )
        for duration in self.sweep.get("durations", []):
            self._check_in_grid("sweep.durations", duration, "durations")
        self.sweep["parameters"] = self._sanitize_sweep_parameters(
            self.sweep.get("parameters")
        )
        for algorithm in self.sweep["algorithms"]:
            for setting in self.parameter_settings(algorithm):
                self.algorithm_parameters(algorithm, setting)

        # Evaluation
        self._check_in_grid(
            "evaluation.folds",
            self.evaluation["folds"],
            "folds",
        )
        try:
            FeatureSet(self.features["classification"]["feature_set"])
        except ValueError:
            raise ValidationError(
                "Invalid feature set "
                f"'{self.features['classification']['feature_set']}'."
            )
        method = self.evaluation["wilcoxon"]["method"]
        if method not in ("auto", "exact", "approx"):
            raise ValidationError(f"Invalid Wilcoxon method '{method}'.")
        self.evaluation["tasks"] = self._sanitize_tasks(
            self.evaluation.get("tasks")
        )

    def _sanitize_sweep_parameters(self, parameters) -> Dict[str, List]:
        """
        Values per varied summarizer parameter; the value `grid` stands for
        all values the grid allows.
        """
        if not parameters:
            return {}
        if not isinstance(parameters, dict):
            raise ValidationError(
                "'sweep.parameters' must map parameter names to values."
            )
        sanitized = {}
        for axis, values in parameters.items():
            if axis not in SWEEP_AXES:
                raise ValidationError(
                    f"Cannot sweep '{axis}'; choose from "
                    f"{', '.join(SWEEP_AXES)}."
                )
            if values == "grid":
                values = self.grid.get(SWEEP_AXES[axis])
            if not isinstance(values, list) or not values:
                raise ValidationError(
                    f"'sweep.parameters.{axis}' must be a non-empty list "
                    "or 'grid'."
                )
            sanitized[axis] = deepcopy(values)
        return sanitized

    @staticmethod
    def _sanitize_tasks(tasks) -> List[List[str]]:
        """Class subsets, each sorted, of at least two distinct classes."""
        if not tasks:
            return []
        if not isinstance(tasks, list):
            raise ValidationError("'evaluation.tasks' must be a list.")
        sanitized = []
        for task in tasks:
            if not isinstance(task, list) or \
                    not all(isinstance(c, str) for c in task) or \
                    len(set(task)) != len(task) or len(task) < 2:
                raise ValidationError(
                    f"Task '{task}' must list at least two distinct "
                    "classes."
                )
            sanitized.append(sorted(task))
        return sanitized

    def _check_in_grid(
        self,
        key: str,
        value,
        grid_key: str,
    ) -> None:
        allowed = self.grid.get(grid_key)
        if allowed is None:
            return
        if isinstance(value, tuple):
            value = list(value)
        if value not in allowed:
            raise ValidationError(
                f"Invalid value '{value}' for '{key}'; allowed: {allowed}."
            )

    @staticmethod
    def sanitize_ranker(
        algorithm: Union[Algorithm, str],
    ) -> str:
        """Parses a ranker name; returns its CLI value."""
        parsed = Algorithm.parse(algorithm)
        if not parsed.is_ranker:
            raise ValidationError(f"'{parsed.value}' is not a ranker.")
        return parsed.value

    def algorithm_block(self, algorithm: Algorithm) -> Dict:
        blocks = self.config["summarization"].get("algorithms", {}) or {}
        return dict(blocks.get(algorithm.name) or blocks.get(algorithm.value)
                    or {})

    def algorithm_parameters(
        self,
        algorithm: Union[Algorithm, str],
        overrides: Optional[Mapping] = None,
    ) -> Dict:
        """
        Summarizer parameters of an algorithm: the shared defaults overlaid
        with the algorithm's block and `overrides`, plus the summarization
        seed and the mel settings of the `features` section.

        :raises SUMusic.errors.ValidationError: A value is outside the grid.
        """
        algorithm = Algorithm.parse(algorithm)
        merged = dict(self.config["summarization"].get("defaults", {}))
        merged.update(self.algorithm_block(algorithm))
        merged.update(overrides or {})
        parameters = {k: v for k, v in merged.items() if k in SUMMARIZER_KEYS}
        parameters["seed"] = self.config["summarization"]["seed"]
        parameters["n_mels"] = self.features["n_mels"]
        parameters["log_floor"] = self.features["log_floor"]

        if "framing" in parameters:
            framing = list(parameters["framing"])
            self._check_in_grid("framing", framing, "framings")
            FramingSpec(*framing)
            parameters["framing"] = framing
        if "n_mfcc" in parameters:
            self._check_in_grid("n_mfcc", parameters["n_mfcc"], "n_mfcc")
        if "vocabulary_size" in parameters:
            self._check_in_grid(
                "vocabulary_size",
                parameters["vocabulary_size"],
                "vocabulary_sizes",
            )
        if "sentence_size" in parameters:
            self._check_in_grid(
                "sentence_size",
                parameters["sentence_size"],
                "sentence_sizes",
            )
        if "weighting" in parameters:
            try:
                Weighting(parameters["weighting"])
            except ValueError:
                raise ValidationError(
                    f"Invalid weighting '{parameters['weighting']}'."
                )
            self._check_in_grid(
                "weighting",
                parameters["weighting"],
                "weightings",
            )
        lam = parameters.get("lambda")
        if algorithm is Algorithm.mmr and lam is not None:
            self._check_in_grid("mmr.lambda", lam, "mmr_lambdas")
        if lam is not None and not 0 <= lam <= 1:
            raise ValidationError(f"Lambda must lie in [0, 1], got {lam}.")
        damping = parameters.get("damping")
        if damping is not None and not 0 < damping < 1:
            raise ValidationError(
                f"Damping factor must lie in (0, 1), got {damping}."
            )
        return parameters

    def parameter_settings(
        self,
        algorithm: Union[Algorithm, str],
    ) -> List[Dict]:
        """
        Every combination of the swept parameter values that applies to
        `algorithm`, axes in name order; `[{}]` if nothing is swept. Lambda
        is only swept for MMR.
        """
        algorithm = Algorithm.parse(algorithm)
        axes = sorted(
            axis for axis in self.sweep.get("parameters", {})
            if axis != "lambda" or algorithm is Algorithm.mmr
        )
        values = [self.sweep["parameters"][axis] for axis in axes]
        return [
            dict(zip(axes, combination)) for combination in product(*values)
        ]

    @staticmethod
    def condition_name(
        algorithm: str,
        duration: float,
        setting: Optional[Mapping] = None,
    ) -> str:
        """
        Name of a sweep condition, e.g. `lexrank-30s` or
        `lexrank-30s-framing=0.5x0.25-weighting=tfidf`.
        """
        name = f"{algorithm}-{duration:g}s"
        for axis in sorted(setting or {}):
            value = setting[axis]
            if isinstance(value, (list, tuple)):
                value = "x".join(f"{v:g}" for v in value)
            elif isinstance(value, float):
                value = f"{value:g}"
            name += f"-{axis}={value}"
        return name

    def avgsim_durations(self) -> List[float]:
        return list(
            self.algorithm_block(Algorithm.avgsim).get("durations", [])
        )
