"""
Tests for persisted dictionary records.
"""
import pytest

from apps.sparse.models import DictionaryRecord
from .factories import DictionaryRecordFactory


@pytest.mark.django_db
class TestDictionaryRecord:

    def test_str(self):
        record = DictionaryRecordFactory(path='dicts/down.octd', scale_tag=4)
        assert str(record) == '64x128 scale 4 - dicts/down.octd'

    def test_lookup_by_scale(self):
        full = DictionaryRecordFactory()
        DictionaryRecordFactory(scale_tag=4)
        assert DictionaryRecord.objects.get(scale_tag=1) == full
        assert len(full.sha256) == 64
