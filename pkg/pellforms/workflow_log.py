"""
Run logger for CLI workflows: stderr stream plus an optional timestamped file
"""
import json
import logging
import os
import sys
from datetime import datetime
from typing import Any, Dict, Optional

from pydantic import BaseModel

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


class WorkflowLogger:
    """Logs workflow steps, decisions and verification records with timestamps"""

    def __init__(self, log_dir: Optional[str] = None, level: str = "INFO"):
        self.log_dir = log_dir
        self.log_file: Optional[str] = None

        handlers: list = [logging.StreamHandler(sys.stderr)]
        if log_dir:
            os.makedirs(log_dir, exist_ok=True)
            timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
            self.log_file = os.path.join(log_dir, f"pellforms_{timestamp}.log")
            handlers.append(logging.FileHandler(self.log_file))

        # force=True so repeated CLI invocations in one process rebind stderr
        logging.basicConfig(
            level=getattr(logging, level.upper(), logging.INFO),
            format=LOG_FORMAT,
            handlers=handlers,
            force=True,
        )
        self.logger = logging.getLogger("pellforms.workflow")

    def log_step(self, step: str, details: Dict[str, Any]):
        """Log a workflow step"""
        self.logger.info(f"STEP: {step}")
        self.logger.debug(f"Details: {json.dumps(details, indent=2, default=str)}")

    def log_decision(self, decision_type: str, decision: str, reasoning: str):
        """Log a verdict or a reading chosen during a run"""
        self.logger.info(f"DECISION: {decision_type}")
        self.logger.info(f"Result: {decision}")
        self.logger.info(f"Reasoning: {reasoning}")

    def log_record(self, record: BaseModel):
        """Log one verification record as a JSON line"""
        self.logger.debug(f"RECORD: {record.model_dump_json()}")

    def get_log_path(self) -> Optional[str]:
        """Get the current log file path"""
        return self.log_file
