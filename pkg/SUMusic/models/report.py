"""
Evaluation results of one or more experimental conditions.
"""
import logging
import os
from typing import (Dict, List, Mapping, Optional, Sequence)

import yaml

from SUMusic.errors import ValidationError
from SUMusic.evaluation import (
    accuracy,
    compare_confusion_matrices,
    confusion_difference,
    cross_validate,
    subset_dataset,
)
from SUMusic.evaluation.significance import MIN_PAIRS
from SUMusic.log import to_plain
from SUMusic.models import (
    ConfusionMatrix,
    LabeledDataset,
    SignificanceResult,
)
from SUMusic.models.experiment import ExperimentConfig

logger = logging.getLogger("SUMusic")


class EvaluationReport:
    """
    Cross-validated confusion matrix of one condition, its accuracies and
    its comparison with the reference condition.
    """
    def __init__(
        self,
        name: str,
        matrix: ConfusionMatrix,
        significance: Optional[SignificanceResult] = None,
        metadata: Optional[Mapping] = None,
    ) -> None:
        self.name = name
        self.matrix = matrix
        self.significance = significance
        self.metadata = dict(metadata or {})
        self.overall, self.per_class = accuracy(matrix)

    def to_dict(self) -> Dict:
        """Return instance attributes as dictionary."""
        return {
            "name": self.name,
            "metadata": self.metadata,
            "classes": self.matrix.classes,
            "confusion_matrix": self.matrix.counts.tolist(),
            "accuracy": self.overall,
            "per_class_accuracy": self.per_class,
            "significance": (
                self.significance.to_dict()
                if self.significance is not None else None
            ),
        }


class RunReport:
    """
    Cross-validates every condition and compares it with the reference
    condition, on all classes and on every configured class subset.
    """
    def __init__(
        self,
        experiment: ExperimentConfig,
        datasets: Mapping[str, LabeledDataset],
        reference: Optional[str] = None,
        metadata: Optional[Mapping[str, Mapping]] = None,
    ) -> None:
        """
        :param experiment: Experiment configuration; embedded in the report.
        :param datasets: Labeled song features per condition name.
        :param reference: Name of the condition every other condition is
                compared with; defaults to the configured reference.
        :param metadata: Optional description (algorithm, duration, swept
                parameters) per condition.

        :raises SUMusic.errors.ValidationError: No conditions, unknown
                reference, conditions with differing class sets or a task
                naming an unknown class.
        """
        self.experiment = experiment
        self.reference = reference or experiment.evaluation["reference"]
        self.timing: Dict[str, float] = {}
        self.warnings: List[str] = []
        if not datasets:
            raise ValidationError("No conditions to evaluate.")
        if self.reference not in datasets:
            raise ValidationError(
                f"Reference condition '{self.reference}' not among "
                f"conditions: {', '.join(datasets)}."
            )
        classes = datasets[self.reference].classes
        for name, data in datasets.items():
            if data.classes != classes:
                raise ValidationError(
                    f"Condition '{name}' has classes {data.classes}, "
                    f"reference has {classes}."
                )

        self.metadata = dict(metadata or {})
        self.conditions = self._evaluate(datasets)
        self.tasks: Dict[str, List[EvaluationReport]] = {}
        for task in experiment.evaluation.get("tasks", []):
            logger.info(f"Evaluating task: {' vs. '.join(task)}")
            self.tasks[self.task_name(task)] = self._evaluate({
                name: subset_dataset(data, task)
                for name, data in datasets.items()
            })

    @staticmethod
    def task_name(classes: Sequence[str]) -> str:
        return "-vs-".join(classes)

    def _evaluate(
        self,
        datasets: Mapping[str, LabeledDataset],
    ) -> List[EvaluationReport]:
        settings = self.experiment.evaluation
        matrices = {
            name: cross_validate(
                data,
                folds=settings["folds"],
                seed=settings["seed"],
                C=settings["classifier"]["C"],
                gamma=settings["classifier"]["gamma"],
                workers=self.experiment.workers,
            )
            for name, data in datasets.items()
        }
        reports = []
        for name, matrix in matrices.items():
            significance = None
            # Two-class tasks have too few cells for a signed-rank test
            if matrix.counts.size >= MIN_PAIRS:
                significance = compare_confusion_matrices(
                    matrix,
                    matrices[self.reference],
                    method=settings["wilcoxon"]["method"],
                    exact_max_n=settings["wilcoxon"]["exact_max_n"],
                )
            reports.append(EvaluationReport(
                name=name,
                matrix=matrix,
                significance=significance,
                metadata=self.metadata.get(name),
            ))
        return reports

    def __getitem__(self, name: str) -> EvaluationReport:
        for condition in self.conditions:
            if condition.name == name:
                return condition
        raise KeyError(name)

    @staticmethod
    def differences(conditions: Sequence[EvaluationReport], reference: str):
        """
        Confusion matrix of every condition minus that of the reference;
        positive diagonal cells and per-class deltas favor the condition.
        """
        matrices = {c.name: c.matrix for c in conditions}
        return {
            c.name: confusion_difference(c.matrix, matrices[reference])
            for c in conditions if c.name != reference
        }

    def best_table(self) -> Dict[str, Dict[float, Dict]]:
        """
        Most accurate condition per algorithm and summary duration, over all
        swept parameter settings; ties go to the condition evaluated first.
        """
        table: Dict[str, Dict[float, Dict]] = {}
        for condition in self.conditions:
            algorithm = condition.metadata.get("algorithm")
            duration = condition.metadata.get("duration")
            if algorithm is None or duration is None:
                continue
            best = table.setdefault(algorithm, {}).get(duration)
            if best is not None and condition.overall <= best["accuracy"]:
                continue
            table[algorithm][duration] = {
                "condition": condition.name,
                "accuracy": condition.overall,
                "parameters": condition.metadata.get("parameters", {}),
                "p_value": (
                    condition.significance.p_value
                    if condition.significance is not None else None
                ),
            }
        return table

    def duration_table(self) -> Dict[str, Dict[float, float]]:
        """Best accuracy per algorithm and summary duration."""
        return {
            algorithm: {d: entry["accuracy"] for d, entry in row.items()}
            for algorithm, row in self.best_table().items()
        }

    def to_dict(self, include_timing: bool = False) -> Dict:
        """
        Return the report as dictionary; timing is only included on request.
        """
        report = {
            "config": self.experiment.to_dict(),
            "reference": self.reference,
            "conditions": [c.to_dict() for c in self.conditions],
            "differences": self.differences(self.conditions, self.reference),
            "accuracy_vs_duration": self.duration_table(),
            "best_per_algorithm": self.best_table(),
            "significance": {
                c.name: c.significance.p_value
                for c in self.conditions if c.significance is not None
            },
            "tasks": {
                name: {
                    "classes": conditions[0].matrix.classes,
                    "conditions": [c.to_dict() for c in conditions],
                    "differences": self.differences(
                        conditions,
                        self.reference,
                    ),
                }
                for name, conditions in self.tasks.items()
            },
            "warnings": self.warnings,
        }
        if include_timing:
            report["timing"] = self.timing
        return report

    def accuracy_rows(self) -> List[List[str]]:
        """Accuracy table, one row per condition, with a header row."""
        classes = self.conditions[0].matrix.classes
        rows = [
            ["condition", "algorithm", "duration_seconds", "accuracy"] +
            classes + ["p_value"]
        ]
        for c in self.conditions:
            per_class = [
                "" if c.per_class[label] is None
                else f"{c.per_class[label]:.6f}"
                for label in classes
            ]
            rows.append([
                c.name,
                str(c.metadata.get("algorithm", "")),
                str(c.metadata.get("duration", "")),
                f"{c.overall:.6f}",
            ] + per_class + [
                f"{c.significance.p_value:.6g}"
                if c.significance is not None else "",
            ])
        return rows

    def best_rows(self) -> List[List[str]]:
        """`best_table()` as rows, with a header row."""
        rows = [[
            "algorithm", "duration_seconds", "condition", "accuracy",
            "p_value",
        ]]
        for algorithm, row in self.best_table().items():
            for duration, entry in row.items():
                rows.append([
                    algorithm,
                    f"{duration:g}",
                    entry["condition"],
                    f"{entry['accuracy']:.6f}",
                    "" if entry["p_value"] is None
                    else f"{entry['p_value']:.6g}",
                ])
        return rows

    def write(self, out_dir: str) -> Dict[str, str]:
        """
        Writes `report.yaml` and `accuracy.tsv` to `out_dir`, plus `best.tsv`
        for sweeps.

        :return: Paths of the written files.
        """
        os.makedirs(out_dir, exist_ok=True)
        paths = {
            "report": os.path.join(out_dir, "report.yaml"),
            "accuracy": os.path.join(out_dir, "accuracy.tsv"),
        }
        with open(paths["report"], "w") as f:
            yaml.safe_dump(
                to_plain(self.to_dict()),
                f,
                allow_unicode=True,
                default_flow_style=False,
            )
        with open(paths["accuracy"], "w") as f:
            for row in self.accuracy_rows():
                f.write("\t".join(row) + "\n")
        best = self.best_rows()
        if len(best) > 1:
            paths["best"] = os.path.join(out_dir, "best.tsv")
            with open(paths["best"], "w") as f:
                for row in best:
                    f.write("\t".join(row) + "\n")
        return paths
