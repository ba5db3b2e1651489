"""
双曲平面点涡旋分析工具

主要模块：
- core: 核心功能模块
"""

__version__ = "1.0.0"
