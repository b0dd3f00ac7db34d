"""配置文件"""

# 几何配置
GEOMETRY_CONFIG = {
    "frame_tol": 1e-12,         # 正交标架容差
    "collinear_tol": 1e-14,     # normalized_det 低于此值视为共线
    "tie_rtol": 1e-15,          # 距离相等的相对容差
    "rho_bound_slack": 1e-9,    # |rho| <= eps * (1/2 + slack) 的检查余量
}

# 上确界范数配置
SUPNORM_CONFIG = {
    "resolution": 512,          # 环面网格分辨率 N
    "min_resolution": 16,
}

# 理想配置
IDEAL_CONFIG = {
    "conditioning_limit": 1e6,  # |(rho - eps) / delta| 超过此值时告警
    "residual_tol": 1e-10,
}

# 分类阈值
CLASSIFY_CONFIG = {
    "slope_threshold": -0.1,    # log-log 斜率阈值
    "decade_drop": 10.0,        # 末值 < 首值 / decade_drop
    "spread_tol": 1e-3,         # m_k 相对离散度
    "chordal_gap": 0.1,         # 方向类之间的弦距离
    "direction_window": 2,      # 检查最小的几个 eps 样本
    "divergence_slope": 0.1,    # |m_k| 发散的斜率阈值
    "deltabig_ratio": 0.25,     # log|delta| / log|eps| 趋于 0 的判定阈值
}

# 解析圆盘包络配置
ENVELOPE_CONFIG = {
    "budget": 3,                # 随机重启次数
    "max_iter": 200,            # 每次 Nelder-Mead 迭代上限
    "simplex_scale": 0.1,       # 初始单纯形尺度
    "boundary_samples": 256,    # 边界采样点数
    "margin": 1e-9,             # 双圆盘内缩余量
    "preimage_tol": 1e-10,
    "sandwich_tol": 1e-9,
    "seed": 0,
}

# 扫描配置
HARNESS_CONFIG = {
    "envelope_band": 0.2,       # 包络与极限值的带宽
    "formula_band": 1e-3,       # 闭式极限的带宽
    "liminf_band": 0.2,
    "pole_guard": 10 * 2.220446049250313e-16,
    "trend_soft": 0.9,
    "trend_hard": 0.5,
    "workers": 1,
}

# 数据库配置
DB_CONFIG = {
    "db_dir": "./data",
    "db_name": "plurigreen.db",
}

# 命令行配置
CLI_CONFIG = {
    "seed_env": "PLURIGREEN_SEED",
    "workers_env": "PLURIGREEN_WORKERS",
    "db_url_env": "PLURIGREEN_DB_URL",
    "default_schedule": [1e-1, 1e-2, 1e-3, 1e-4, 1e-5],
}
