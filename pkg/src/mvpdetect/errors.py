"""Exception hierarchy.

Data errors (bad or missing inputs) map to CLI exit code 2, computation
errors (degenerate training, shape mismatches) to exit code 3.
"""


class DetectorError(Exception):
    exit_code = 3


class DataError(DetectorError):
    exit_code = 2


class ComputationError(DetectorError):
    exit_code = 3


class ParseError(DataError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ConfigError(DataError):
    pass


class MissingTranscript(DataError):
    def __init__(self, asr_id, audio_id=None):
        self.asr_id = asr_id
        self.audio_id = audio_id
        where = f" for audio {audio_id!r}" if audio_id is not None else ""
        super().__init__(f"missing transcript from ASR {asr_id!r}{where}")


class DuplicateTranscript(DataError):
    def __init__(self, audio_id, asr_id, line=None):
        self.audio_id = audio_id
        self.asr_id = asr_id
        self.line = line
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"duplicate transcript ({audio_id!r}, {asr_id!r}){where}")


class NotFound(DataError):
    pass


class BackendTimeout(DataError):
    pass


class BadResponse(DataError):
    pass


class TranscriptionFailed(DataError):
    """Raised by the parallel fan-out when one or more backends fail.

    ``failures`` maps asr_id to the exception raised by that backend and
    ``results`` keeps the transcripts that did succeed.
    """

    def __init__(self, failures, results):
        self.failures = dict(failures)
        self.results = dict(results)
        detail = "; ".join(f"{asr}: {exc}" for asr, exc in sorted(self.failures.items()))
        super().__init__(f"{len(self.failures)} backend(s) failed: {detail}")


class UnknownAsr(DataError):
    pass


class LabelError(DataError):
    pass


class InvalidSpec(DataError):
    pass


class EmptyPool(ComputationError):
    pass


class InvalidSplit(ComputationError):
    pass


class DegenerateTraining(ComputationError):
    def __init__(self, message, fold=None):
        self.fold = fold
        if fold is not None:
            message = f"fold {fold}: {message}"
        super().__init__(message)


class DimensionMismatch(ComputationError):
    def __init__(self, expected, actual):
        self.expected = expected
        self.actual = actual
        super().__init__(f"expected feature vector of length {expected}, got {actual}")


class ModelMismatch(ComputationError):
    pass
