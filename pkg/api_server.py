#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Toric Agent - FastAPI服务器
把命令行分析流水线封装为 JSON 接口，响应内容与 CLI 的 JSON 报告一致

提供的接口：
- GET /health - 健康检查
- POST /analyze - 结构不变量
- POST /tree-constants - 树常数
- POST /check/cb - 复平衡判定
- POST /check/db - 细致平衡判定
- POST /birch - Birch 点
"""

import logging
import os
import sys
from typing import Any, List, Optional

# 添加项目路径
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

import numpy as np
import uvicorn
from fastapi import FastAPI, Request, status
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field, ValidationError, model_validator

from config.settings import get_config, setup_logging
from main import AnalysisPipeline, RunConfig
from Toric_Agent import __version__
from Toric_Agent.common.errors import NetworkInputError, ToricAgentError, ToricDomainError
from Toric_Agent.corpus import bundled_path

# 设置日志
setup_logging()
logger = logging.getLogger(__name__)

# 创建FastAPI应用
app = FastAPI(
    title="Toric Agent API",
    description="质量作用反应网络的环面动力系统分析服务",
    version=__version__,
    docs_url="/docs",
    redoc_url="/redoc"
)

# 添加CORS中间件
app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

# ===== 数据模型 =====


class NetworkRequest(BaseModel):
    """网络请求：DSL 文本或内置网络名二选一，可附带速率文件内容"""
    network: Optional[str] = Field(None, description="网络 DSL 文本", max_length=200_000)
    bundled: Optional[str] = Field(None, description="内置网络名，如 triangle", max_length=100)
    rates: Optional[str] = Field(None, description="速率文件内容（每行 i j value），覆盖行内速率")

    model_config = {
        "json_schema_extra": {
            "example": {
                "network": "2 c1 <-> c1 + c2 ; kf=1, kr=1\n2 c1 <-> 2 c2 ; kf=1, kr=1\n"
                           "c1 + c2 <-> 2 c2 ; kf=1, kr=1\n",
            }
        }
    }

    @model_validator(mode='after')
    def _one_source(self) -> 'NetworkRequest':
        if (self.network is None) == (self.bundled is None):
            raise ValueError("network 与 bundled 必须且只能给出一个")
        return self

    def network_text(self) -> str:
        if self.network is not None:
            return self.network
        return bundled_path(self.bundled).read_text(encoding='utf-8')


class TreeConstantsRequest(NetworkRequest):
    enumerate_trees: bool = Field(False, description="同时做 i-树枚举交叉验证")


class BirchRequest(NetworkRequest):
    initial: List[float] = Field(..., min_length=1, description="初始浓度 c0")
    starts: Optional[int] = Field(None, ge=1, le=100, description="唯一性探测的起点数")
    seed: int = Field(0, description="唯一性探测的随机种子")
    tol: Optional[float] = Field(None, gt=0, lt=1, description="残差容差")


# ===== 异常映射 =====

@app.exception_handler(NetworkInputError)
async def network_input_error_handler(request: Request, exc: NetworkInputError):
    return JSONResponse(status_code=status.HTTP_400_BAD_REQUEST, content=exc.to_dict())


@app.exception_handler(ToricDomainError)
async def domain_error_handler(request: Request, exc: ToricDomainError):
    return JSONResponse(status_code=status.HTTP_422_UNPROCESSABLE_ENTITY, content=exc.to_dict())


def _run(request: NetworkRequest, subcommand: str, **options) -> Any:
    """构造 RunConfig 并执行与 CLI 相同的流水线"""
    try:
        config = RunConfig(subcommand=subcommand, network_text=request.network_text(),
                           rates_text=request.rates, **options)
    except (ValidationError, FileNotFoundError) as e:
        return JSONResponse(status_code=status.HTTP_400_BAD_REQUEST,
                            content={'error': 'UsageError', 'message': str(e)})
    pipeline = AnalysisPipeline(config)
    try:
        payload, code = pipeline.run()
    except ToricAgentError:
        raise
    except np.linalg.LinAlgError as e:
        return JSONResponse(status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
                            content={'error': 'LinAlgError', 'message': str(e)})
    except ValueError as e:
        return JSONResponse(status_code=status.HTTP_400_BAD_REQUEST,
                            content={'error': 'UsageError', 'message': str(e)})
    payload = {k: v for k, v in payload.items() if not k.startswith('_')}
    logger.info(f"✅ {subcommand} 完成 (exit={code})")
    return payload


# ===== 核心API接口 =====

@app.get("/health")
async def health_check():
    """健康检查接口"""
    return {
        "status": "healthy",
        "service": "Toric Agent API",
        "version": __version__,
    }


@app.post("/analyze")
def analyze_network(request: NetworkRequest):
    """结构不变量：连通类、弱可逆性、σ、δ"""
    return _run(request, 'analyze')


@app.post("/tree-constants")
def tree_constants(request: TreeConstantsRequest):
    """Matrix-Tree 树常数"""
    return _run(request, 'tree-constants', enumerate_trees=request.enumerate_trees)


@app.post("/check/cb")
def check_complex_balancing(request: NetworkRequest):
    """复平衡判定；不平衡时返回违反的二项式"""
    return _run(request, 'check', check_kind='cb')


@app.post("/check/db")
def check_detailed_balancing(request: NetworkRequest):
    """细致平衡判定；不平衡时返回违反的回路"""
    return _run(request, 'check', check_kind='db')


@app.post("/birch")
def birch(request: BirchRequest):
    """Birch 点，可选唯一性探测"""
    return _run(request, 'birch', initial=request.initial, starts=request.starts,
                seed=request.seed, tol=request.tol)


# ===== 启动服务器 =====

def start_server(host: Optional[str] = None, port: Optional[int] = None, reload: bool = False):
    """启动FastAPI服务器"""
    api_config = get_config()['api']
    host = host or api_config['host']
    port = port or api_config['port']
    logger.info(f"🚀 启动 Toric Agent API 服务器: http://{host}:{port} (文档 /docs)")

    uvicorn.run(
        "api_server:app",
        host=host,
        port=port,
        reload=reload,
        log_level="info"
    )


if __name__ == "__main__":
    import argparse

    parser = argparse.ArgumentParser(description="Toric Agent API服务器")
    parser.add_argument("--host", default=None, help="服务器主机地址")
    parser.add_argument("--port", type=int, default=None, help="服务器端口")
    parser.add_argument("--reload", action="store_true", help="开发模式自动重载")

    args = parser.parse_args()
    start_server(host=args.host, port=args.port, reload=args.reload)
