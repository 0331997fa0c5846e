"""
Certificate cache for TSC Graphs
SQLite store of finished search certificates, keyed by graph and search configuration
"""
import json
import logging
import os
import sqlite3
from contextlib import closing
from datetime import datetime, timezone
from typing import Any, Dict, Optional

import pandas as pd

from app.config import config
from app.models import SearchCertificate, SearchConfig, canonical_json, sha256_hex

logger = logging.getLogger(__name__)


def cache_key(graph_record: Dict[str, Any], search_config: SearchConfig) -> str:
    """SHA-256 of the graph's canonical JSON followed by the search configuration

    The worker count and progress interval are left out: neither changes the outcome or the totals.
    """
    settings = search_config.to_dict(include_threads=False)
    settings.pop('progress_interval')
    return sha256_hex(canonical_json(graph_record) + canonical_json(settings))


class CertificateCache:
    """SQLite certificate store; the file is only opened on first use"""

    def __init__(self, cache_dir: Optional[str] = None):
        self.cache_dir = cache_dir
        self._ready = False

    @property
    def db_path(self) -> str:
        return config.cache_path(self.cache_dir)

    def use_directory(self, cache_dir: str):
        """Point the cache somewhere else (the CLI --cache-dir flag)"""
        self.cache_dir = cache_dir
        self._ready = False

    def ensure_database_exists(self):
        """Create cache directory if it doesn't exist"""
        directory = os.path.dirname(self.db_path)
        if directory:
            os.makedirs(directory, exist_ok=True)

    def get_connection(self):
        """Get database connection"""
        if not self._ready:
            self.ensure_database_exists()
            self.create_tables()
        return sqlite3.connect(self.db_path)

    def create_tables(self):
        with closing(sqlite3.connect(self.db_path)) as conn:
            cursor = conn.cursor()
            cursor.execute("""
                CREATE TABLE IF NOT EXISTS certificates (
                    cache_key TEXT PRIMARY KEY,
                    kind TEXT NOT NULL,
                    label TEXT,
                    outcome TEXT,
                    payload TEXT NOT NULL,
                    created_at TIMESTAMP
                )
            """)
            cursor.execute("CREATE INDEX IF NOT EXISTS idx_certificates_label ON certificates(label)")
            conn.commit()
        self._ready = True

    def get(self, key: str) -> Optional[SearchCertificate]:
        """Stored certificate marked as a cache hit, or None"""
        with closing(self.get_connection()) as conn:
            row = conn.execute("SELECT payload FROM certificates WHERE cache_key = ?", [key]).fetchone()
        if row is None:
            return None
        certificate = SearchCertificate.from_dict(json.loads(row[0]))
        certificate.cache_hit = True
        logger.info("Cache hit for %s (%s)", certificate.graph_label, key[:12])
        return certificate

    def put(self, key: str, certificate: SearchCertificate, kind: str = "search"):
        payload = certificate.to_dict()
        payload['cache_hit'] = False
        with closing(self.get_connection()) as conn:
            conn.execute("""
                INSERT OR REPLACE INTO certificates (cache_key, kind, label, outcome, payload, created_at)
                VALUES (?, ?, ?, ?, ?, ?)
            """, (key, kind, certificate.graph_label, certificate.outcome.value,
                  json.dumps(payload, sort_keys=True), datetime.now(timezone.utc).isoformat()))
            conn.commit()
        logger.debug("Cached %s certificate for %s", kind, certificate.graph_label)

    def list_entries(self) -> pd.DataFrame:
        """Every cached certificate without its payload"""
        query = """
            SELECT cache_key, kind, label, outcome, created_at
            FROM certificates
            ORDER BY created_at DESC
        """
        with closing(self.get_connection()) as conn:
            return pd.read_sql_query(query, conn)

    def clear(self) -> int:
        with closing(self.get_connection()) as conn:
            removed = conn.execute("DELETE FROM certificates").rowcount
            conn.commit()
        logger.info("Removed %d cached certificates", removed)
        return removed


# Global cache instance
certificate_cache = CertificateCache()
