"""Test package for Synoptic Core."""