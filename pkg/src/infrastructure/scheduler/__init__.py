"""Trial scheduling package."""
from infrastructure.scheduler.trial_executor import TrialExecutor

__all__ = ["TrialExecutor"]
