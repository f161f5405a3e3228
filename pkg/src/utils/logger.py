# src/utils/logger.py

import threading
from datetime import datetime
from typing import Any, Dict, List, Optional


class TxtLogger:
    """
    Handles writing detailed, human-readable run logs to a .txt file in a thread-safe manner.
    """
    def __init__(self, log_path: str, total_epochs: int, header: Optional[Dict[str, Any]] = None):
        self.log_path = log_path
        self.total_epochs = total_epochs
        self.logged_epochs = 0
        self.best_total_loss: Optional[float] = None
        self.lock = threading.Lock()
        with open(self.log_path, 'w', encoding='utf-8') as f:
            f.write(f"--- Log Session Started at {datetime.now().strftime('%Y-%m-%d %H:%M:%S')} ---\n\n")
            if header:
                f.write("***** RUN CONFIG *****\n")
                for key in sorted(header):
                    f.write(f"{key:<22}: {header[key]}\n")
                f.write("\n")

    def format_and_log(self, record: Dict[str, Any]):
        """
        Formats a single epoch record (see trainer.EpochRecord.to_dict) into a text block and appends it.
        """
        epoch = record.get('epoch', '?')

        header_str = f"{'='*100}\n"
        header_str += f"[Epoch {epoch}/{self.total_epochs}]\n"
        header_str += f"{'='*100}\n"

        loss_str = "***** LOSS TERMS *****\n"
        loss_str += f"TOTAL                  : {record.get('total_loss', float('nan')):.6f}\n"
        loss_str += f"CE (image / text)      : {record.get('loss_img', float('nan')):.6f}, {record.get('loss_txt', float('nan')):.6f}\n"
        loss_str += f"ALIGN (fc1 / fc2)      : {record.get('align_fc1', 0.0):.6f}, {record.get('align_fc2', 0.0):.6f}\n"

        coral_str = "***** CORAL DISTANCE *****\n"
        coral_str += f"fc1 ~ fc1'             : {record.get('coral_fc1', float('nan')):.6e}\n"
        coral_str += f"fc2 ~ fc2'             : {record.get('coral_fc2', float('nan')):.6e}\n"

        val_str = ""
        if record.get('val_map_i2t') is not None:
            val_str = "***** VALIDATION MAP *****\n"
            val_str += f"Image->Text / Text->Image : {record['val_map_i2t']:.4f}, {record['val_map_t2i']:.4f}\n"

        monitoring_str = ""
        total = record.get('total_loss')
        if total is not None:
            with self.lock:
                self.logged_epochs += 1
                if self.best_total_loss is None or total < self.best_total_loss:
                    self.best_total_loss = total
                monitoring_str = (
                    "***** MONITORING *****\n"
                    f"EPOCHS LOGGED          : {self.logged_epochs}\n"
                    f"BEST TOTAL LOSS        : {self.best_total_loss:.6f}\n"
                )

        self._append(header_str + loss_str + coral_str + val_str + monitoring_str + "\n")

    def log_report(self, title: str, rows: List[Dict[str, Any]]):
        """평가 결과(MAP 리포트 등) 테이블을 그대로 텍스트 블록으로 기록"""
        block = f"{'*'*100}\n***** {title} *****\n"
        for row in rows:
            block += "  " + ", ".join(f"{k}={v}" for k, v in row.items()) + "\n"
        block += f"{'*'*100}\n\n"
        self._append(block)

    def log_message(self, message: str):
        self._append(f"[{datetime.now().strftime('%H:%M:%S')}] {message}\n\n")

    def _append(self, text: str):
        with self.lock:
            with open(self.log_path, 'a', encoding='utf-8') as f:
                f.write(text)
