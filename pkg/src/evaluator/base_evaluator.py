# src/evaluator/base_evaluator.py
from abc import ABC, abstractmethod
from typing import Any


class BaseEvaluator(ABC):
    """
    모든 평가기가 상속받아야 하는 추상 기본 클래스.
    학습된 모델과 평가할 데이터 조각을 받아 리포트를 돌려준다.
    """
    def __init__(self, config):
        self.config = config

    @abstractmethod
    def evaluate(self, params, dataset, ids_by_modality, **kwargs) -> Any:
        pass
