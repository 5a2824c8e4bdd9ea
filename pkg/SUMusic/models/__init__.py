"""
Basic models for representing signals, features, documents, selections and
evaluation results.
"""
import enum
from typing import (Dict, Iterable, List, Optional, Sequence, Tuple)

import numpy as np

from SUMusic.errors import ValidationError


class Algorithm(enum.Enum):
    """
    Enumerator class for summarization algorithms and contiguous baselines.
    """
    grasshopper = "grasshopper"
    lexrank = "lexrank"
    lsa = "lsa"
    mmr = "mmr"
    support_sets = "support-sets"
    avgsim = "avgsim"
    begin = "begin"
    middle = "middle"
    end = "end"
    full = "full"

    @classmethod
    def parse(cls, value) -> "Algorithm":
        """Accepts members, member names ('support_sets') or values."""
        if isinstance(value, cls):
            return value
        try:
            return cls[str(value)]
        except KeyError:
            pass
        try:
            return cls(str(value))
        except ValueError:
            raise ValidationError(f"Unknown algorithm: '{value}'.")

    @property
    def is_ranker(self) -> bool:
        return self in RANKERS


RANKERS = frozenset([
    Algorithm.grasshopper,
    Algorithm.lexrank,
    Algorithm.lsa,
    Algorithm.mmr,
    Algorithm.support_sets,
])


class Weighting(enum.Enum):
    """
    Enumerator class for sentence weighting schemes.
    """
    binary = "binary"
    tfidf = "tfidf"


class Anchor(enum.Enum):
    """
    Enumerator class for contiguous baseline positions.
    """
    begin = "begin"
    middle = "middle"
    end = "end"


class FeatureSet(enum.Enum):
    """
    Enumerator class for song-level classification feature sets.
    """
    full = "full"
    mfcc = "mfcc"


class AudioClip:
    """
    Mono signal with amplitudes in [-1, 1].
    """
    def __init__(
        self,
        samples: np.ndarray,
        sample_rate: int,
        source_path: Optional[str] = None,
    ) -> None:
        if int(sample_rate) <= 0:
            raise ValidationError(
                f"Sample rate must be positive, got {sample_rate}."
            )
        self.samples = np.asarray(samples, dtype=np.float64)
        self.sample_rate = int(sample_rate)
        self.source_path = source_path

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def duration_seconds(self) -> float:
        return len(self.samples) / self.sample_rate

    def to_dict(self) -> Dict:
        """Return instance attributes as dictionary (without samples)."""
        return {
            "n_samples": len(self.samples),
            "sample_rate": self.sample_rate,
            "duration_seconds": self.duration_seconds,
            "source_path": self.source_path,
        }


class FramingSpec:
    """
    Frame and hop sizes, in seconds.
    """
    def __init__(
        self,
        frame_seconds: float,
        hop_seconds: float,
    ) -> None:
        if frame_seconds <= 0 or hop_seconds <= 0:
            raise ValidationError(
                "Frame and hop sizes must be positive, got "
                f"({frame_seconds}, {hop_seconds})."
            )
        if hop_seconds > frame_seconds:
            raise ValidationError(
                f"Hop size {hop_seconds} exceeds frame size {frame_seconds}."
            )
        self.frame_seconds = float(frame_seconds)
        self.hop_seconds = float(hop_seconds)

    def frame_length(self, sample_rate: int) -> int:
        return int(round(self.frame_seconds * sample_rate))

    def hop_length(self, sample_rate: int) -> int:
        return int(round(self.hop_seconds * sample_rate))

    def to_dict(self) -> Dict:
        """Return instance attributes as dictionary."""
        return {
            "frame_seconds": self.frame_seconds,
            "hop_seconds": self.hop_seconds,
        }


class TimeSpan:
    """
    Half-open time interval [start, end), in seconds.
    """
    def __init__(
        self,
        start_seconds: float,
        end_seconds: float,
    ) -> None:
        if start_seconds < 0 or end_seconds <= start_seconds:
            raise ValidationError(
                f"Invalid time span [{start_seconds}, {end_seconds})."
            )
        self.start_seconds = float(start_seconds)
        self.end_seconds = float(end_seconds)

    @property
    def duration_seconds(self) -> float:
        return self.end_seconds - self.start_seconds

    def __eq__(self, other) -> bool:
        if not isinstance(other, TimeSpan):
            return NotImplemented
        return (
            self.start_seconds == other.start_seconds and
            self.end_seconds == other.end_seconds
        )

    def __repr__(self) -> str:
        return f"TimeSpan({self.start_seconds}, {self.end_seconds})"

    def to_dict(self) -> Dict:
        """Return instance attributes as dictionary."""
        return {
            "start_seconds": self.start_seconds,
            "end_seconds": self.end_seconds,
        }


class SpectralDescriptors:
    """
    The nine per-frame spectral descriptors.
    """
    NAMES = (
        "centroid",
        "spread",
        "skewness",
        "kurtosis",
        "flux",
        "rolloff",
        "brightness",
        "entropy",
        "flatness",
    )

    def __init__(
        self,
        centroid: float,
        spread: float,
        skewness: float,
        kurtosis: float,
        flux: float,
        rolloff: float,
        brightness: float,
        entropy: float,
        flatness: float,
    ) -> None:
        self.centroid = centroid
        self.spread = spread
        self.skewness = skewness
        self.kurtosis = kurtosis
        self.flux = flux
        self.rolloff = rolloff
        self.brightness = brightness
        self.entropy = entropy
        self.flatness = flatness

    def as_array(self) -> np.ndarray:
        return np.array([getattr(self, name) for name in self.NAMES])

    def to_dict(self) -> Dict:
        """Return instance attributes as dictionary."""
        return {name: float(getattr(self, name)) for name in self.NAMES}


class FrameMatrix:
    """
    Per-frame feature vectors of one song.
    """
    def __init__(
        self,
        rows: np.ndarray,
        feature_layout: Sequence[str],
        framing: FramingSpec,
        frame_times: np.ndarray,
        duration_seconds: float,
    ) -> None:
        rows = np.atleast_2d(np.asarray(rows, dtype=np.float64))
        if rows.shape[1] != len(feature_layout):
            raise ValidationError(
                f"Frame dimension {rows.shape[1]} does not match feature "
                f"layout of size {len(feature_layout)}."
            )
        if not np.all(np.isfinite(rows)):
            raise ValidationError("Frame features contain NaN or Inf.")
        self.rows = rows
        self.feature_layout = list(feature_layout)
        self.framing = framing
        self.frame_times = np.asarray(frame_times, dtype=np.float64)
        self.duration_seconds = float(duration_seconds)

    def __len__(self) -> int:
        return self.rows.shape[0]

    @property
    def dimension(self) -> int:
        return self.rows.shape[1]

    def to_dict(self) -> Dict:
        """Return instance attributes as dictionary (without rows)."""
        return {
            "n_frames": len(self),
            "feature_layout": self.feature_layout,
            "framing": self.framing.to_dict(),
            "duration_seconds": self.duration_seconds,
        }


class SongFeatureVector:
    """
    Song-level classification features.
    """
    def __init__(
        self,
        values: np.ndarray,
        layout: Sequence[str],
    ) -> None:
        values = np.asarray(values, dtype=np.float64)
        if values.shape != (len(layout),):
            raise ValidationError(
                f"Feature vector of shape {values.shape} does not match "
                f"layout of size {len(layout)}."
            )
        self.values = values
        self.layout = list(layout)

    def __len__(self) -> int:
        return len(self.values)

    def to_dict(self) -> Dict:
        """Return instance attributes as dictionary."""
        return dict(zip(self.layout, self.values.tolist()))


class Vocabulary:
    """
    Frame-cluster centroids ("musical words") of one song.
    """
    def __init__(
        self,
        centroids: np.ndarray,
        distortion: float,
        seed: int,
        history: Iterable[float] = (),
        iterations: int = 0,
    ) -> None:
        self.centroids = np.atleast_2d(np.asarray(centroids, dtype=np.float64))
        self.distortion = float(distortion)
        self.seed = seed
        self.history = list(history)
        self.iterations = iterations

    @property
    def size(self) -> int:
        return self.centroids.shape[0]

    def to_dict(self) -> Dict:
        """Return instance attributes as dictionary."""
        return {
            "size": self.size,
            "distortion": self.distortion,
            "seed": self.seed,
            "iterations": self.iterations,
        }


class TokenizedSong:
    """
    A song as a document: word sequence, fixed-size sentences and the time
    extent of every sentence.
    """
    def __init__(
        self,
        words: np.ndarray,
        sentences: List[Tuple[int, int]],
        sentence_spans: List[TimeSpan],
        vocabulary: Vocabulary,
    ) -> None:
        self.words = np.asarray(words, dtype=np.int64)
        self.sentences = list(sentences)
        self.sentence_spans = list(sentence_spans)
        self.vocabulary = vocabulary

    def __len__(self) -> int:
        return len(self.sentences)

    def to_dict(self) -> Dict:
        """Return instance attributes as dictionary."""
        return {
            "n_words": len(self.words),
            "sentences": [list(s) for s in self.sentences],
            "sentence_spans": [s.to_dict() for s in self.sentence_spans],
            "vocabulary": self.vocabulary.to_dict(),
        }


class SentenceVectors:
    """
    One K-dimensional weight vector per sentence.
    """
    def __init__(
        self,
        matrix: np.ndarray,
        scheme: Weighting,
    ) -> None:
        self.matrix = np.atleast_2d(np.asarray(matrix, dtype=np.float64))
        self.scheme = scheme

    def __len__(self) -> int:
        return self.matrix.shape[0]

    def to_dict(self) -> Dict:
        """Return instance attributes as dictionary."""
        return {
            "n_sentences": len(self),
            "dimension": self.matrix.shape[1],
            "scheme": self.scheme.value,
        }


class SimilarityGraph:
    """
    Symmetric matrix of pairwise sentence similarities.
    """
    def __init__(
        self,
        matrix: np.ndarray,
    ) -> None:
        matrix = np.atleast_2d(np.asarray(matrix, dtype=np.float64))
        if matrix.shape[0] != matrix.shape[1]:
            raise ValidationError(
                f"Similarity matrix must be square, got {matrix.shape}."
            )
        self.matrix = matrix

    @property
    def n(self) -> int:
        return self.matrix.shape[0]


class GrasshopperParams:
    """
    Mixing weight and prior ranking distribution of the absorbing walk.
    """
    def __init__(
        self,
        lam: float,
        prior: np.ndarray,
    ) -> None:
        if not 0 <= lam <= 1:
            raise ValidationError(
                f"GRASSHOPPER lambda must lie in [0, 1], got {lam}."
            )
        prior = np.asarray(prior, dtype=np.float64)
        if prior.ndim != 1 or np.any(prior < 0) or \
                not np.isclose(prior.sum(), 1.0, rtol=0, atol=1e-9):
            raise ValidationError(
                "GRASSHOPPER prior must be a probability vector."
            )
        self.lam = float(lam)
        self.prior = prior

    @classmethod
    def uniform(cls, n: int, lam: float) -> "GrasshopperParams":
        return cls(lam=lam, prior=np.full(n, 1.0 / n))


class SummarySelection:
    """
    Sentences chosen by a summarizer and the time spans to render.
    """
    def __init__(
        self,
        ranking: Sequence[int],
        selected: Sequence[int],
        spans: Sequence[TimeSpan],
        target_seconds: float,
        algorithm: Algorithm,
        parameters: Optional[Dict] = None,
        warnings: Optional[List[str]] = None,
    ) -> None:
        self.ranking = [int(i) for i in ranking]
        self.selected = [int(i) for i in selected]
        self.spans = list(spans)
        self.target_seconds = float(target_seconds)
        self.algorithm = algorithm
        self.parameters = dict(parameters or {})
        self.warnings = list(warnings or [])

    @property
    def total_seconds(self) -> float:
        return float(sum(span.duration_seconds for span in self.spans))

    def to_dict(self) -> Dict:
        """Return instance attributes as dictionary."""
        return {
            "algorithm": self.algorithm.value,
            "parameters": self.parameters,
            "target_seconds": self.target_seconds,
            "total_seconds": self.total_seconds,
            "ranking": self.ranking,
            "selected": self.selected,
            "spans": [span.to_dict() for span in self.spans],
            "warnings": self.warnings,
        }


class LabeledItem:
    """
    Feature vector of one song with its class label.
    """
    def __init__(
        self,
        vector: np.ndarray,
        label: str,
        song_id: str,
    ) -> None:
        self.vector = np.asarray(vector, dtype=np.float64)
        self.label = label
        self.song_id = song_id


class LabeledDataset:
    """
    Labeled song feature vectors with a fixed class order.
    """
    def __init__(
        self,
        items: Iterable[LabeledItem],
        classes: Sequence[str],
    ) -> None:
        self.items = list(items)
        self.classes = list(classes)
        self.validate()

    def validate(self) -> None:
        known = set(self.classes)
        if len(known) != len(self.classes):
            raise ValidationError("Duplicate class names.")
        ids = set()
        for item in self.items:
            if item.label not in known:
                raise ValidationError(f"Unknown class label '{item.label}'.")
            if item.song_id in ids:
                raise ValidationError(f"Duplicate song id '{item.song_id}'.")
            ids.add(item.song_id)

    def __len__(self) -> int:
        return len(self.items)

    @property
    def X(self) -> np.ndarray:
        return np.vstack([item.vector for item in self.items])

    @property
    def y(self) -> np.ndarray:
        index = {c: i for i, c in enumerate(self.classes)}
        return np.array([index[item.label] for item in self.items])

    def class_counts(self) -> Dict[str, int]:
        counts = {c: 0 for c in self.classes}
        for item in self.items:
            counts[item.label] += 1
        return counts

    def subset(self, indices: Iterable[int]) -> "LabeledDataset":
        return LabeledDataset(
            items=[self.items[i] for i in indices],
            classes=self.classes,
        )


class ConfusionMatrix:
    """
    Counts of true (rows) versus predicted (columns) classes.
    """
    def __init__(
        self,
        counts: np.ndarray,
        classes: Sequence[str],
    ) -> None:
        counts = np.asarray(counts, dtype=np.int64)
        if counts.shape != (len(classes), len(classes)):
            raise ValidationError(
                f"Confusion matrix of shape {counts.shape} does not match "
                f"{len(classes)} classes."
            )
        if np.any(counts < 0):
            raise ValidationError("Confusion matrix counts must be >= 0.")
        self.counts = counts
        self.classes = list(classes)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def to_dict(self) -> Dict:
        """Return instance attributes as dictionary."""
        return {
            "classes": self.classes,
            "counts": self.counts.tolist(),
        }


class SignificanceResult:
    """
    Outcome of a Wilcoxon signed-rank test.
    """
    def __init__(
        self,
        statistic: float,
        p_value: float,
        n_effective: int,
        w_plus: float = 0.0,
        w_minus: float = 0.0,
        method: str = "exact",
    ) -> None:
        self.statistic = float(statistic)
        self.p_value = float(p_value)
        self.n_effective = int(n_effective)
        self.w_plus = float(w_plus)
        self.w_minus = float(w_minus)
        self.method = method

    def to_dict(self) -> Dict:
        """Return instance attributes as dictionary."""
        return {
            "statistic": self.statistic,
            "p_value": self.p_value,
            "n_effective": self.n_effective,
            "w_plus": self.w_plus,
            "w_minus": self.w_minus,
            "method": self.method,
        }


class SectionRecipe:
    """
    Synthesis recipe of one structural section of a song.
    """
    def __init__(
        self,
        name: str,
        seconds: Sequence[float],
        tones: Sequence[float] = (),
        tone_level: float = 0.0,
        band: Sequence[float] = (100.0, 1000.0),
        noise_level: float = 0.0,
        pulse_hz: float = 0.0,
        pulse_depth: float = 0.0,
        gain: float = 0.5,
    ) -> None:
        if len(seconds) != 2 or not 0 < seconds[0] <= seconds[1]:
            raise ValidationError(
                f"Section '{name}': invalid duration range {list(seconds)}."
            )
        if len(band) != 2 or not 0 < band[0] < band[1]:
            raise ValidationError(
                f"Section '{name}': invalid frequency band {list(band)}."
            )
        if not 0 <= pulse_depth <= 1:
            raise ValidationError(
                f"Section '{name}': pulse depth must lie in [0, 1]."
            )
        self.name = name
        self.seconds = (float(seconds[0]), float(seconds[1]))
        self.tones = [float(f) for f in tones]
        self.tone_level = float(tone_level)
        self.band = (float(band[0]), float(band[1]))
        self.noise_level = float(noise_level)
        self.pulse_hz = float(pulse_hz)
        self.pulse_depth = float(pulse_depth)
        self.gain = float(gain)

    def to_dict(self) -> Dict:
        """Return instance attributes as dictionary."""
        return {
            "name": self.name,
            "seconds": list(self.seconds),
            "tones": self.tones,
            "tone_level": self.tone_level,
            "band": list(self.band),
            "noise_level": self.noise_level,
            "pulse_hz": self.pulse_hz,
            "pulse_depth": self.pulse_depth,
            "gain": self.gain,
        }


class GenreProfile:
    """
    Section grammar of one synthetic genre.
    """
    def __init__(
        self,
        name: str,
        sections: Iterable[SectionRecipe],
    ) -> None:
        self.name = name
        self.sections = list(sections)
        if len({s.name for s in self.sections}) < 2:
            raise ValidationError(
                f"Genre '{name}' needs at least 2 distinct sections."
            )

    @classmethod
    def from_dict(cls, name: str, conf: Dict) -> "GenreProfile":
        return cls(
            name=name,
            sections=[SectionRecipe(**s) for s in conf["sections"]],
        )

    def to_dict(self) -> Dict:
        """Return instance attributes as dictionary."""
        return {
            "name": self.name,
            "sections": [s.to_dict() for s in self.sections],
        }


class ManifestRow:
    """
    One audio file of a dataset.
    """
    def __init__(
        self,
        path: str,
        label: str,
        duration_seconds: float,
        seed: Optional[int] = None,
    ) -> None:
        self.path = path
        self.label = label
        self.duration_seconds = float(duration_seconds)
        self.seed = seed

    @property
    def song_id(self) -> str:
        return self.path

    def __eq__(self, other) -> bool:
        if not isinstance(other, ManifestRow):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    def to_dict(self) -> Dict:
        """Return instance attributes as dictionary."""
        return {
            "path": self.path,
            "label": self.label,
            "duration_seconds": self.duration_seconds,
            "seed": self.seed,
        }


class DatasetManifest:
    """
    List of labeled audio files.
    """
    VERSION = 1

    def __init__(
        self,
        rows: Iterable[ManifestRow] = (),
        version: int = VERSION,
        root: str = ".",
        declared_classes: Optional[Sequence[str]] = None,
    ) -> None:
        self.rows = list(rows)
        self.version = version
        self.root = root
        self.declared_classes = (
            list(declared_classes) if declared_classes is not None else None
        )
        paths = [row.path for row in self.rows]
        if len(set(paths)) != len(paths):
            raise ValidationError("Manifest paths must be unique.")
        if self.declared_classes is not None:
            for row in self.rows:
                if row.label not in self.declared_classes:
                    raise ValidationError(
                        f"Label '{row.label}' of '{row.path}' is not a "
                        "declared class."
                    )

    def __len__(self) -> int:
        return len(self.rows)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DatasetManifest):
            return NotImplemented
        return self.version == other.version and self.rows == other.rows

    @property
    def classes(self) -> List[str]:
        """Declared class labels or, if none were declared, labels in order of
        first appearance."""
        if self.declared_classes is not None:
            return list(self.declared_classes)
        seen: List[str] = []
        for row in self.rows:
            if row.label not in seen:
                seen.append(row.label)
        return seen

    def to_dict(self) -> Dict:
        """Return instance attributes as dictionary."""
        return {
            "version": self.version,
            "classes": self.classes,
            "rows": [row.to_dict() for row in self.rows],
        }
