"""Synthetic data.

Two generators live here:

* hypothetical multiple-ASR-effective (MAE) adversarial feature vectors,
  assembled from pools of observed benign and adversarial scores.  If an AE
  fools the target and some auxiliary, that auxiliary agrees with the
  target the way it would on a benign input, so its score is drawn from the
  benign pool; every other auxiliary score comes from the adversarial pool;
* transcript corpora (benign, targeted AE, non-targeted AE) standing in for
  real recordings run through real recognizers.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from ._corpus import COMMANDS, HOST_TEXTS
from .errors import EmptyPool, InvalidSpec, UnknownAsr
from .features import FeatureVector, SystemConfig
from .ingest import Transcript, TranscriptStore, derive_rng, perturb_words


@dataclass(frozen=True)
class ScorePools:
    lambda_be: tuple[float, ...]
    lambda_ak: tuple[float, ...]

    def check(self) -> None:
        if not self.lambda_be:
            raise EmptyPool("benign score pool is empty")
        if not self.lambda_ak:
            raise EmptyPool("adversarial score pool is empty")


@dataclass(frozen=True)
class MaeType:
    fooled: frozenset[str]
    label: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "fooled", frozenset(self.fooled))

    def name(self, config: SystemConfig) -> str:
        ordered = [a for a in config.asr_ids if a in self.fooled]
        return f"AE({','.join(ordered)})"


def build_pools(benign_fvs: Iterable[FeatureVector], ae_fvs: Iterable[FeatureVector]) -> ScorePools:
    be = tuple(s for v in benign_fvs for s in v.scores)
    ak = tuple(s for v in ae_fvs for s in v.scores)
    pools = ScorePools(be, ak)
    pools.check()
    return pools


def mae_types(config: SystemConfig) -> dict[str, MaeType]:
    """Every MAE type for ``config``, labelled ``Type-1``, ``Type-2``, ...

    Types are ordered by the number of fooled auxiliaries, then by
    auxiliary declaration order.  With three auxiliaries this yields the six
    types target+{a1}, +{a2}, +{a3}, +{a1,a2}, +{a1,a3}, +{a2,a3}.
    Fooling every auxiliary is excluded: such an AE is indistinguishable
    from a benign input.
    """
    out = {}
    aux = config.auxiliary_asrs
    k = 1
    for size in range(1, len(aux)):
        for combo in itertools.combinations(aux, size):
            label = f"Type-{k}"
            out[label] = MaeType(frozenset((config.target_asr, *combo)), label)
            k += 1
    return out


def _check_mae(config: SystemConfig, mae: MaeType) -> None:
    known = set(config.asr_ids)
    unknown = sorted(mae.fooled - known)
    if unknown:
        raise UnknownAsr(f"MAE type references unknown ASR(s): {unknown}")
    if config.target_asr not in mae.fooled:
        raise InvalidSpec(f"MAE type must fool the target ASR {config.target_asr!r}")
    if mae.fooled == known:
        raise InvalidSpec("an MAE type cannot fool every ASR in the system")


def synth_mae(pools: ScorePools, config: SystemConfig, mae: MaeType, count: int,
              seed: int) -> list[FeatureVector]:
    """``count`` synthetic AE vectors of type ``mae``.

    Each position is drawn independently and with replacement: from the
    benign pool if that auxiliary is fooled, else from the adversarial pool.
    """
    pools.check()
    _check_mae(config, mae)
    tag = mae.label or mae.name(config)
    rng = derive_rng(seed, "mae", tag)
    fooled = [aux in mae.fooled for aux in config.auxiliary_asrs]
    out = []
    for i in range(count):
        scores = [rng.choice(pools.lambda_be if f else pools.lambda_ak) for f in fooled]
        out.append(FeatureVector(f"{tag}-{i:05d}", scores, "ae"))
    return out


def comprehensive_types(config: SystemConfig) -> dict[str, MaeType]:
    """Types fooling all but one auxiliary (Types 4-6 for three auxiliaries)."""
    n = config.n
    return {k: t for k, t in mae_types(config).items() if len(t.fooled) == n}


def synth_comprehensive(pools: ScorePools, config: SystemConfig, count_per_type: int,
                        seed: int) -> list[FeatureVector]:
    pools.check()
    out = []
    for mae in comprehensive_types(config).values():
        out.extend(synth_mae(pools, config, mae, count_per_type, seed))
    return out


@dataclass(frozen=True)
class CorpusSpec:
    """Size and noise of a synthetic transcript corpus.

    ``wer`` is the per-word substitution rate applied to every auxiliary
    transcript.  ``ae_kind`` is ``"targeted"`` (the target transcribes an
    embedded command) or ``"untargeted"`` (the target transcribes the host
    with word error rate ``untargeted_wer``).
    """

    n_benign: int
    n_ae: int
    wer: float = 0.1
    seed: int = 0
    ae_kind: str = "targeted"
    untargeted_wer: float = 0.8

    def validate(self) -> None:
        if not 0 <= self.wer < 1:
            raise InvalidSpec(f"wer must be in [0, 1), got {self.wer}")
        if not 0 <= self.untargeted_wer < 1:
            raise InvalidSpec(f"untargeted_wer must be in [0, 1), got {self.untargeted_wer}")
        if self.n_benign < 0 or self.n_ae < 0:
            raise InvalidSpec("sample counts must be non-negative")
        if self.ae_kind not in ("targeted", "untargeted"):
            raise InvalidSpec(f"unknown ae_kind {self.ae_kind!r}")


def synth_corpus(spec: CorpusSpec, config: SystemConfig,
                 host_texts: Sequence[str] = HOST_TEXTS,
                 commands: Sequence[str] = COMMANDS) -> tuple[TranscriptStore, list[tuple[str, str]]]:
    """Generate transcripts for every ASR of ``config`` plus a manifest.

    Benign audio: the target hears the host sentence verbatim and each
    auxiliary hears it with word substitutions at rate ``spec.wer``.
    Adversarial audio: the target transcribes an embedded command while the
    auxiliaries still hear the (perturbed) host sentence.
    """
    spec.validate()
    if not host_texts:
        raise InvalidSpec("host_texts must be non-empty")
    if spec.n_ae and spec.ae_kind == "targeted" and not commands:
        raise InvalidSpec("commands must be non-empty for targeted AEs")

    transcripts: list[Transcript] = []
    manifest: list[tuple[str, str]] = []

    def emit(audio_id, target_text, host):
        transcripts.append(Transcript(audio_id, config.target_asr, target_text))
        for aux in config.auxiliary_asrs:
            text = perturb_words(host, spec.wer, derive_rng(spec.seed, audio_id, aux))
            transcripts.append(Transcript(audio_id, aux, text))

    for i in range(spec.n_benign):
        audio_id = f"benign-{i:05d}"
        rng = derive_rng(spec.seed, audio_id)
        host = rng.choice(host_texts)
        emit(audio_id, host, host)
        manifest.append((audio_id, "benign"))

    for i in range(spec.n_ae):
        audio_id = f"ae-{i:05d}"
        rng = derive_rng(spec.seed, audio_id)
        host = rng.choice(host_texts)
        if spec.ae_kind == "targeted":
            target_text = rng.choice(commands)
        else:
            target_text = perturb_words(host, spec.untargeted_wer, rng)
        emit(audio_id, target_text, host)
        manifest.append((audio_id, "ae"))

    return TranscriptStore(transcripts), manifest
