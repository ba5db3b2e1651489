"""
配置模块

包含应用配置：
- default_settings.json: 数值容差、积分器、扫描与输出的默认设置
"""
