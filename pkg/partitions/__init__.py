"""
partitions/__init__.py
Strict and odd strict partition streams.
"""

from partitions.strict import (
    Partition,
    PartitionKind,
    count_table,
    eigen_poly,
    enumerate_partitions,
    max_length,
    partitions_of_weight,
)
