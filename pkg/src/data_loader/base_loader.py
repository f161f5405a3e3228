# src/data_loader/base_loader.py

from abc import ABC, abstractmethod

from .records import Dataset


class BaseDataLoader(ABC):
    """
    모든 데이터 로더가 상속받아야 하는 추상 기본 클래스입니다.
    모든 로더가 동일한 인터페이스(load_data -> Dataset)를 갖도록 보장합니다.
    """
    source_name = "base"

    def __init__(self, config):
        # config: src.utils.config.RunConfig
        self.config = config

    @abstractmethod
    def load_data(self) -> Dataset:
        """데이터셋을 로드하여 검증된 Dataset으로 반환합니다."""
        pass
