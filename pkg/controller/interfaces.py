# -*- coding: utf-8 -*-
"""
Interface definitions for controller layer
Provides clear contracts between the CLI and core logic
"""
from abc import ABC, abstractmethod
from typing import Any, Dict, List

from core.data_transform import ReportRow


class IExperimentRunner(ABC):
    """Interface for running one strength sweep"""

    @abstractmethod
    def prepare(self) -> None:
        """Load model, data and detector; raise on any configuration problem"""
        pass

    @abstractmethod
    def run_experiment(self) -> List[ReportRow]:
        """
        Attack every sampled image at every strength value

        Returns:
            One ReportRow per strength value, in grid order
        """
        pass

    @abstractmethod
    def get_progress_summary(self) -> Dict[str, Any]:
        """Get current progress summary"""
        pass
