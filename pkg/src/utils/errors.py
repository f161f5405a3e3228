# src/utils/errors.py
"""
프로젝트 전역 예외/경고 정의.
- 계약 위반(shape, label, 빈 배치 등)은 ValueError 계열로도 잡을 수 있게 다중 상속
- main.py에서 S3CAError만 잡아서 exit code 1로 변환
"""

from typing import Optional


class S3CAError(Exception):
    """Base class for every error raised on purpose by this package."""


class ShapeError(S3CAError, ValueError):
    pass


class DegenerateBatch(S3CAError, ValueError):
    pass


class LabelError(S3CAError, ValueError):
    pass


class ConfigError(S3CAError, ValueError):
    pass


class DivergenceError(S3CAError, ArithmeticError):
    def __init__(self, epoch: int, step: int, value: float):
        self.epoch = epoch
        self.step = step
        self.value = value
        super().__init__(f"non-finite loss {value!r} at epoch {epoch}, step {step}")


class ParseError(S3CAError, ValueError):
    def __init__(self, message: str, path: Optional[str] = None, line_no: Optional[int] = None):
        self.path = path
        self.line_no = line_no
        location = ""
        if path is not None:
            location = f"{path}:{line_no}: " if line_no is not None else f"{path}: "
        super().__init__(f"{location}{message}")


class DimensionMismatch(S3CAError, ValueError):
    def __init__(self, message: str, record_id: Optional[str] = None):
        self.record_id = record_id
        super().__init__(message)


class EmptyCorpus(S3CAError, ValueError):
    pass


class EmptyPartition(S3CAError, ValueError):
    pass


class EmptyTraining(S3CAError, ValueError):
    pass


class DanglingReference(S3CAError, FileNotFoundError):
    pass


class DegenerateVector(S3CAError, ValueError):
    pass


class IncompatibleMetric(S3CAError, ValueError):
    pass


class NoRelevantItems(S3CAError, ValueError):
    pass


class NoEvaluableQueries(S3CAError, ValueError):
    pass


class UnknownQueryId(S3CAError, KeyError):
    def __str__(self) -> str:
        # KeyError는 메시지를 repr로 감싸기 때문에 원문 그대로 출력
        return str(self.args[0]) if self.args else ""


class LabelGapWarning(UserWarning):
    """Label ids are not contiguous in [0, K)."""


class LabelCountWarning(UserWarning):
    """The two modalities disagree on the number of labels."""


class SparseLabelWarning(UserWarning):
    """A label has fewer samples than there are partitions to fill."""
