"""
Audit Logger Module
Maintains an audit trail of computations run through the toolkit
"""

import json
import logging
import os
import tempfile
import uuid
from dataclasses import dataclass, asdict
from datetime import datetime, timedelta
from pathlib import Path
from typing import Any, Dict, List, Optional

from .errors import ValidationError
from .helpers import calculate_params_hash, to_serializable, truncate_text

logger = logging.getLogger(__name__)

EXPORT_COLUMNS = ["entry_id", "timestamp", "session_id", "action_type", "subcommand",
                  "params_hash", "exit_status", "result_summary"]
MAX_LIST_ITEMS = 20


@dataclass
class AuditEntry:
    """One line of the audit trail."""
    entry_id: str
    timestamp: str
    session_id: str
    action_type: str
    subcommand: str
    params_hash: str
    description: str
    details: Dict
    exit_status: int = 0
    result_summary: Optional[str] = None


def entry_row(entry: Dict) -> Dict:
    """Flat view of an entry with the export columns."""
    return {column: entry.get(column) for column in EXPORT_COLUMNS}


class AuditLogger:
    """
    Records CLI computations in daily JSON files (audit_YYYYMMDD.json).

    Parameters are stored sanitized and as a sha256 prefix, so repeated runs
    with the same inputs can be found with get_params_history. Files are
    rewritten atomically; a file that no longer parses is moved aside to
    <name>.corrupt-<time> before the next write.
    """

    def __init__(self, log_directory: str = None):
        if log_directory is None:
            from config.settings import AUDIT_LOG_DIR
            log_directory = AUDIT_LOG_DIR
        self.log_dir = Path(log_directory)
        self.log_dir.mkdir(parents=True, exist_ok=True)
        now = datetime.now()
        self.session_id = f"session_{now:%Y%m%d_%H%M%S}_{uuid.uuid4().hex[:8]}"
        self.current_log_file = self.log_dir / f"audit_{now:%Y%m%d}.json"

    # ------------------------------------------------------------------
    # Recording

    def log_action(self, action_type: str, subcommand: str = "", params: Dict = None,
                   description: str = "", details: Dict = None, exit_status: int = 0,
                   result_summary: str = None) -> AuditEntry:
        """
        Append an entry to today's file.

        Args:
            action_type: COMPUTE, VERIFY, EXPORT or ERROR
            subcommand: CLI subcommand that ran
            params: Request parameters, hashed into params_hash
            description: One-line description
            details: Extra structured data, truncated to keep entries small
            exit_status: Process exit status of the run
            result_summary: Short summary of the result

        Returns:
            The entry written
        """
        entry = AuditEntry(
            entry_id=f"entry_{uuid.uuid4().hex[:12]}",
            timestamp=datetime.now().isoformat(),
            session_id=self.session_id,
            action_type=action_type,
            subcommand=subcommand,
            params_hash=calculate_params_hash(params) if params else "",
            description=description,
            details=self._shrink(to_serializable(details or {})),
            exit_status=exit_status,
            result_summary=truncate_text(result_summary, 200) if result_summary else None,
        )
        entries = self._load(self.current_log_file, quarantine=True)
        entries.append(asdict(entry))
        self._store(self.current_log_file, entries)
        return entry

    def log_computation(self, subcommand: str, params: Dict,
                        exit_status: int, summary: str) -> AuditEntry:
        return self.log_action("COMPUTE", subcommand, params, f"Ran {subcommand}",
                               {"params": params}, exit_status, summary)

    def log_verify(self, tag: Optional[str], passed: int, total: int,
                   exit_status: int) -> AuditEntry:
        description = "Ran verification suite" + (f" (tag={tag})" if tag else "")
        return self.log_action("VERIFY", "verify", {"tag": tag}, description,
                               {"passed": passed, "total": total}, exit_status,
                               f"{passed}/{total} checks passed")

    def log_export(self, subcommand: str, export_format: str, path: str) -> AuditEntry:
        return self.log_action("EXPORT", subcommand,
                               description=f"Exported {subcommand} output as {export_format}",
                               details={"export_format": export_format, "path": path},
                               result_summary=f"Wrote {path}")

    def log_error(self, subcommand: str, error_type: str, error_message: str,
                  params: Dict = None, exit_status: int = 1) -> AuditEntry:
        return self.log_action("ERROR", subcommand, params, "Encountered error",
                               {"error_type": error_type, "error_message": error_message},
                               exit_status, f"Error: {error_type}")

    # ------------------------------------------------------------------
    # Storage

    def _store(self, log_file: Path, entries: List[Dict]):
        """Write the whole day file through a temporary file and os.replace."""
        fd, tmp_path = tempfile.mkstemp(prefix=f".{log_file.stem}-", suffix=".tmp",
                                        dir=str(self.log_dir))
        try:
            with os.fdopen(fd, "w") as f:
                json.dump(entries, f, indent=2)
            os.replace(tmp_path, log_file)
        except BaseException:
            if os.path.exists(tmp_path):
                os.unlink(tmp_path)
            raise

    def _load(self, log_file: Path, quarantine: bool = False) -> List[Dict]:
        if not log_file.exists():
            return []
        try:
            with open(log_file, "r") as f:
                entries = json.load(f)
            if not isinstance(entries, list):
                raise ValueError("audit file does not hold a list")
            return entries
        except (ValueError, OSError) as e:
            if not quarantine:
                logger.warning("Skipping unreadable audit file %s: %s", log_file, e)
                return []
            moved = log_file.with_name(f"{log_file.name}.corrupt-{datetime.now():%Y%m%d%H%M%S%f}")
            os.replace(log_file, moved)
            logger.warning("Audit file %s did not parse (%s); moved to %s", log_file, e, moved)
            return []

    def _day_files(self, start_date: str = None, end_date: str = None) -> List[Path]:
        files = []
        for log_file in sorted(self.log_dir.glob("audit_*.json")):
            day = log_file.stem[len("audit_"):]
            if (start_date and day < start_date) or (end_date and day > end_date):
                continue
            files.append(log_file)
        return files

    def _entries(self, start_date: str = None, end_date: str = None) -> List[Dict]:
        entries = []
        for log_file in self._day_files(start_date, end_date):
            entries.extend(self._load(log_file))
        return entries

    def _shrink(self, data: Any) -> Any:
        if isinstance(data, dict):
            return {k: self._shrink(v) for k, v in data.items()}
        if isinstance(data, list):
            return [self._shrink(v) for v in data[:MAX_LIST_ITEMS]]
        if isinstance(data, str):
            return truncate_text(data, 500)
        return data

    # ------------------------------------------------------------------
    # Queries (the `audit` subcommand)

    def get_params_history(self, params_hash: str) -> List[Dict]:
        """Every run made with the same parameters, oldest first."""
        matches = [e for e in self._entries() if e.get("params_hash") == params_hash]
        return sorted(matches, key=lambda e: e.get("timestamp", ""))

    def get_recent_logs(self, limit: int = 50) -> List[Dict]:
        """Newest entries first."""
        if limit < 1:
            raise ValidationError("limit must be positive", details={"limit": limit})
        entries = sorted(self._entries(), key=lambda e: e.get("timestamp", ""), reverse=True)
        return entries[:limit]

    def generate_audit_report(self, start_date: str = None, end_date: str = None) -> Dict:
        """
        Counts by action and subcommand over a date range (YYYYMMDD, inclusive).

        Returns:
            period, total_entries, action_counts, subcommand_counts,
            unique_sessions, error_count and the ten latest errors
        """
        entries = self._entries(start_date, end_date)
        action_counts: Dict[str, int] = {}
        subcommand_counts: Dict[str, int] = {}
        for entry in entries:
            action = entry.get("action_type", "UNKNOWN")
            action_counts[action] = action_counts.get(action, 0) + 1
            sub = entry.get("subcommand") or "none"
            subcommand_counts[sub] = subcommand_counts.get(sub, 0) + 1
        errors = [{"timestamp": e.get("timestamp"), "subcommand": e.get("subcommand"),
                   "error": e.get("details", {}).get("error_message", "unknown")}
                  for e in entries if e.get("action_type") == "ERROR"]
        errors.sort(key=lambda e: e["timestamp"] or "", reverse=True)
        return {
            "period": {"start": start_date or "all", "end": end_date or "all"},
            "total_entries": len(entries),
            "action_counts": action_counts,
            "subcommand_counts": subcommand_counts,
            "unique_sessions": len({e.get("session_id", "") for e in entries}),
            "error_count": len(errors),
            "recent_errors": errors[:10],
        }

    def export_logs(self, format: str = "json") -> str:
        """The whole trail as JSON (full entries) or CSV (EXPORT_COLUMNS)."""
        entries = self._entries()
        if format == "json":
            return json.dumps(entries, indent=2)
        if format == "csv":
            import pandas as pd

            if not entries:
                return ""
            return pd.DataFrame([entry_row(e) for e in entries]).to_csv(index=False)
        raise ValidationError(f"Unsupported export format: {format}",
                              details={"formats": ["json", "csv"]})

    def clear_old_logs(self, days_to_keep: int = 90) -> List[str]:
        """Delete day files older than the retention window; returns the removed names."""
        if days_to_keep < 0:
            raise ValidationError("days_to_keep must be nonnegative",
                                  details={"days_to_keep": days_to_keep})
        cutoff = f"{datetime.now() - timedelta(days=days_to_keep):%Y%m%d}"
        removed = []
        for log_file in self._day_files(end_date=cutoff):
            if log_file.stem[len("audit_"):] < cutoff:
                log_file.unlink()
                removed.append(log_file.name)
        return removed
